//! Discrete-derivative calculus on exact tables: derivatives, degree
//! measurement, the binomial-monomial basis, residue-lift degree bounds,
//! product-degree additivity, and the binomial divisibility toolkit.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{factorize, GroupElement, GroupSpec};
use crate::rational::UnitRational;
use crate::rng::SplitMix64;
use crate::table::{ExactTable, FunctionTable};

/// Outcome of a degree measurement.
///
/// Degree k means every (k+1)-fold derivative vanishes and some k-fold one
/// does not. The zero table reports degree 0 with `is_zero` set (it is a
/// polynomial of degree k for every k). Tables that are not polynomial of
/// any degree below the cutoff report `NoFiniteDegree`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegreeResult {
    Polynomial { degree: u32, is_zero: bool },
    NoFiniteDegree { cutoff: u32 },
}

impl DegreeResult {
    /// The measured degree, if the table is polynomial below the cutoff.
    pub fn degree(&self) -> Option<u32> {
        match self {
            DegreeResult::Polynomial { degree, .. } => Some(*degree),
            DegreeResult::NoFiniteDegree { .. } => None,
        }
    }

    /// Smallest j such that all j-fold derivatives vanish (degree + 1,
    /// or 0 for the zero table).
    pub fn vanishing_order(&self) -> Option<u32> {
        match self {
            DegreeResult::Polynomial { is_zero: true, .. } => Some(0),
            DegreeResult::Polynomial { degree, .. } => Some(degree + 1),
            DegreeResult::NoFiniteDegree { .. } => None,
        }
    }
}

impl ExactTable {
    /// Additive derivative (d_h f)(x) = f(x+h) - f(x), exact.
    pub fn derivative(&self, h: &GroupElement) -> Result<ExactTable> {
        let shifted = self.translate(h)?;
        let values = shifted
            .values()
            .iter()
            .zip(self.values())
            .map(|(a, b)| a - b)
            .collect();
        FunctionTable::from_values(self.spec().clone(), values)
    }

    fn derivative_along_generator(&self, i: usize) -> ExactTable {
        self.derivative(&self.spec().generator(i))
            .expect("generator belongs to the spec")
    }

    /// Default cutoff for degree sweeps:
    /// sum (d_i - 1) * ceil(log2 max denominator) + n.
    pub fn default_degree_cutoff(&self) -> u32 {
        let spec = self.spec();
        let max_den = self
            .values()
            .iter()
            .map(|v| v.denominator().clone())
            .max()
            .unwrap_or_else(BigUint::one);
        let log2 = if max_den <= BigUint::one() {
            0u64
        } else {
            (&max_den - BigUint::one()).bits()
        };
        let sum: u64 = spec.moduli().iter().map(|&d| d - 1).sum();
        (sum.saturating_mul(log2) + spec.rank() as u64).min(u32::MAX as u64) as u32
    }

    /// Degree via derivatives along the generator set only, sweeping levels
    /// of multiset generator derivatives until a level vanishes.
    pub fn degree(&self) -> DegreeResult {
        self.degree_with_cutoff(self.default_degree_cutoff())
    }

    pub fn degree_with_cutoff(&self, cutoff: u32) -> DegreeResult {
        if self.is_zero() {
            return DegreeResult::Polynomial {
                degree: 0,
                is_zero: true,
            };
        }
        let spec = self.spec().clone();
        let gens: Vec<usize> = (0..spec.rank()).filter(|&i| spec.moduli()[i] > 1).collect();
        // Tables at level k are the k-fold derivatives, keyed by the sorted
        // multiset of generator indices; zero tables are pruned since all
        // their descendants vanish.
        let mut level: BTreeMap<Vec<usize>, ExactTable> = BTreeMap::new();
        level.insert(Vec::new(), self.clone());
        let mut k = 0u32;
        loop {
            let mut next: BTreeMap<Vec<usize>, ExactTable> = BTreeMap::new();
            for (tuple, table) in &level {
                let start = tuple.last().map_or(0, |&g| {
                    gens.iter().position(|&x| x == g).unwrap()
                });
                for &i in &gens[start..] {
                    let d = table.derivative_along_generator(i);
                    if !d.is_zero() {
                        let mut t = tuple.clone();
                        t.push(i);
                        next.insert(t, d);
                    }
                }
            }
            if next.is_empty() {
                return DegreeResult::Polynomial {
                    degree: k,
                    is_zero: false,
                };
            }
            k += 1;
            if k > cutoff {
                return DegreeResult::NoFiniteDegree { cutoff };
            }
            level = next;
        }
    }

    /// Degree measured against all shifts h in G, the expensive oracle the
    /// generator sweep is validated against.
    pub fn degree_all_shifts(&self, cutoff: u32) -> DegreeResult {
        fn go(
            f: &ExactTable,
            depth: u32,
            cutoff: u32,
            memo: &mut HashMap<Vec<UnitRational>, DegreeResult>,
        ) -> DegreeResult {
            if f.values().windows(2).all(|w| w[0] == w[1]) {
                return DegreeResult::Polynomial {
                    degree: 0,
                    is_zero: f.is_zero(),
                };
            }
            if depth >= cutoff {
                return DegreeResult::NoFiniteDegree { cutoff };
            }
            if let Some(r) = memo.get(f.values()) {
                return r.clone();
            }
            let mut worst = 0u32;
            for h in f.spec().elements().skip(1) {
                let d = f.derivative(&h).unwrap();
                match go(&d, depth + 1, cutoff, memo) {
                    DegreeResult::Polynomial { degree, .. } => worst = worst.max(degree),
                    r @ DegreeResult::NoFiniteDegree { .. } => return r,
                }
            }
            let r = DegreeResult::Polynomial {
                degree: worst + 1,
                is_zero: false,
            };
            // Only exact degrees are memoized; a cutoff hit depends on the
            // remaining depth and must not be reused.
            memo.insert(f.values().to_vec(), r.clone());
            r
        }
        // Memo hits can resolve degrees past the depth guard; normalize so
        // anything above the cutoff reports the same way as the sweep.
        match go(self, 0, cutoff, &mut HashMap::new()) {
            DegreeResult::Polynomial { degree, .. } if degree > cutoff => {
                DegreeResult::NoFiniteDegree { cutoff }
            }
            r => r,
        }
    }
}

/// Report of [`degree_generator_sufficiency_check`].
#[derive(Clone, Debug, Serialize)]
pub struct SufficiencyReport {
    pub spec: GroupSpec,
    pub trials: u32,
    pub disagreements: u32,
}

/// Validation harness for the generator-only degree test: on random exact
/// tables, the generator sweep and the all-shift oracle must agree.
pub fn degree_generator_sufficiency_check(
    spec: &GroupSpec,
    trials: u32,
    seed: u64,
) -> Result<SufficiencyReport> {
    if spec.order() > 4096 {
        return Err(Error::Precondition(format!(
            "sufficiency check needs |G| <= 4096, got {}",
            spec.order()
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let denominators = [2u64, 3, 4, 6, 8];
    let mut disagreements = 0;
    for t in 0..trials {
        let q = denominators[(t as usize) % denominators.len()];
        let f = ExactTable::from_fn(spec, |_| UnitRational::new(rng.next_below(q), q));
        let cutoff = f.default_degree_cutoff();
        let by_generators = f.degree_with_cutoff(cutoff);
        let by_all_shifts = f.degree_all_shifts(cutoff);
        if by_generators != by_all_shifts {
            disagreements += 1;
        }
    }
    Ok(SufficiencyReport {
        spec: spec.clone(),
        trials,
        disagreements,
    })
}

/// A T-valued polynomial in the binomial-monomial basis: terms map exponent
/// tuples (a_1..a_n with a_i < d_i) to coefficients, and evaluation at x is
/// sum c * prod binom(|x_i|, a_i) mod 1 over the fundamental-domain lift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialPhase {
    spec: GroupSpec,
    terms: BTreeMap<Vec<u32>, UnitRational>,
    degree_bound: u32,
}

impl PolynomialPhase {
    pub fn new(spec: GroupSpec, degree_bound: u32) -> Self {
        PolynomialPhase {
            spec,
            terms: BTreeMap::new(),
            degree_bound,
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, UnitRational> {
        &self.terms
    }

    pub fn set_term(&mut self, exponents: Vec<u32>, coeff: UnitRational) -> Result<()> {
        if exponents.len() != self.spec.rank() {
            return Err(Error::Precondition(format!(
                "exponent tuple has {} entries, group has rank {}",
                exponents.len(),
                self.spec.rank()
            )));
        }
        for (&a, &d) in exponents.iter().zip(self.spec.moduli()) {
            if a as u64 >= d {
                return Err(Error::Precondition(format!(
                    "exponent {a} must be < modulus {d}"
                )));
            }
        }
        let total: u32 = exponents.iter().sum();
        if total > self.degree_bound {
            return Err(Error::Precondition(format!(
                "total exponent {total} exceeds declared degree bound {}",
                self.degree_bound
            )));
        }
        if coeff.is_zero() {
            self.terms.remove(&exponents);
        } else {
            self.terms.insert(exponents, coeff);
        }
        Ok(())
    }

    /// Exact monomial-basis evaluation using the residue lift.
    pub fn eval(&self, x: &GroupElement) -> Result<UnitRational> {
        if !self.spec.contains(x) {
            return Err(Error::Precondition(format!(
                "point {x} does not belong to group {}",
                self.spec
            )));
        }
        let lift = self.spec.residue_lift(x);
        let mut acc = UnitRational::zero();
        for (exps, coeff) in &self.terms {
            let mut mult = BigUint::one();
            for (&a, &xi) in exps.iter().zip(&lift) {
                mult *= binomial(xi, a as u64);
                if mult.is_zero() {
                    break;
                }
            }
            acc = &acc + &coeff.scale(BigInt::from(mult));
        }
        Ok(acc)
    }

    pub fn to_table(&self) -> ExactTable {
        ExactTable::from_fn(&self.spec, |x| self.eval(x).unwrap())
    }

    /// Parses the term format `c/q * x1^(a1) x2^(a2) + ...`; a bare `c/q`
    /// term is the constant. Variables are 1-based.
    pub fn parse(spec: &GroupSpec, text: &str) -> Result<Self> {
        let mut phase = PolynomialPhase::new(spec.clone(), u32::MAX);
        let mut max_total = 0u32;
        let mut terms: BTreeMap<Vec<u32>, UnitRational> = BTreeMap::new();
        for raw in text.split('+') {
            let raw = raw.trim();
            if raw.is_empty() {
                return Err(Error::Parse("empty term".into()));
            }
            let mut pieces = raw.split_whitespace().flat_map(|p| {
                p.split('*')
                    .filter(|s| !s.is_empty())
                    .map(str::to_string)
                    .collect::<Vec<_>>()
            });
            let coeff_text = pieces
                .next()
                .ok_or_else(|| Error::Parse("term missing coefficient".into()))?;
            let coeff = parse_fraction(&coeff_text)?;
            let mut exps = vec![0u32; spec.rank()];
            for factor in pieces {
                let (var, exp) = parse_factor(&factor)?;
                if var == 0 || var > spec.rank() {
                    return Err(Error::Parse(format!(
                        "variable x{var} out of range for group {spec}"
                    )));
                }
                exps[var - 1] += exp;
            }
            max_total = max_total.max(exps.iter().sum());
            let entry = terms.entry(exps).or_insert_with(UnitRational::zero);
            *entry = &*entry + &coeff;
        }
        phase.degree_bound = max_total;
        for (exps, coeff) in terms {
            phase.set_term(exps, coeff)?;
        }
        Ok(phase)
    }
}

impl fmt::Display for PolynomialPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0/1");
        }
        let mut first = true;
        for (exps, coeff) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{coeff}")?;
            for (i, &a) in exps.iter().enumerate() {
                if a > 0 {
                    write!(f, " x{}^({})", i + 1, a)?;
                }
            }
        }
        Ok(())
    }
}

fn parse_fraction(s: &str) -> Result<UnitRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: i64 = num
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad coefficient {s:?}")))?;
    let den: i64 = den
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad coefficient {s:?}")))?;
    if den == 0 {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(UnitRational::new(num, den))
}

fn parse_factor(s: &str) -> Result<(usize, u32)> {
    let body = s
        .strip_prefix('x')
        .ok_or_else(|| Error::Parse(format!("bad factor {s:?}, expected xI^(A)")))?;
    let (var, exp) = match body.split_once('^') {
        Some((v, e)) => {
            let e = e
                .trim()
                .strip_prefix('(')
                .and_then(|e| e.strip_suffix(')'))
                .ok_or_else(|| Error::Parse(format!("bad exponent in {s:?}")))?;
            (v, e)
        }
        None => (body, "1"),
    };
    let var: usize = var
        .parse()
        .map_err(|_| Error::Parse(format!("bad variable index in {s:?}")))?;
    let exp: u32 = exp
        .parse()
        .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
    Ok((var, exp))
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut res = BigUint::one();
    for i in 0..k {
        res = res * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    res
}

/// p-adic valuation of binom(a, b) as the number of carries when adding
/// b and a-b in base p.
pub fn binom_valuation(a: u64, b: u64, p: u64) -> Result<u32> {
    if b > a {
        return Err(Error::Precondition(format!("need b <= a, got {b} > {a}")));
    }
    if p < 2 || factorize(p).len() != 1 || factorize(p)[0].1 != 1 {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    let (mut x, mut y) = (b, a - b);
    let mut carry = 0u64;
    let mut carries = 0u32;
    while x > 0 || y > 0 || carry > 0 {
        let digit = x % p + y % p + carry;
        carry = digit / p;
        if carry > 0 {
            carries += 1;
        }
        x /= p;
        y /= p;
    }
    Ok(carries)
}

/// Which reading of the d_{m,r} formula to take over the prime factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DmrConvention {
    /// The formula as displayed: max over p_i of p_i^(a_i(r-1)+1).
    Max,
    /// The value the divisibility proof supports: the min. Default.
    Min,
}

/// d_{m,r} over the prime factorization m = prod p_i^{a_i}: the max or min
/// of p_i^(a_i(r-1)+1). Both conventions coincide for prime powers. The
/// stated max formula fails for general m (first at m=6, r=1), so the min
/// is the default everywhere downstream.
pub fn d_mr(m: u64, r: u32, convention: DmrConvention) -> Result<u64> {
    if m < 2 || r < 1 {
        return Err(Error::Precondition(format!(
            "d_mr needs m >= 2 and r >= 1, got m={m}, r={r}"
        )));
    }
    let vals = factorize(m)
        .into_iter()
        .map(|(p, a)| p.pow(a * (r - 1) + 1));
    Ok(match convention {
        DmrConvention::Max => vals.max().unwrap(),
        DmrConvention::Min => vals.min().unwrap(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgLemmaFailure {
    pub j: u64,
    /// binom(m^r, j) mod m when small enough to expand, else None.
    pub binom_mod_m: Option<u64>,
}

/// Report of [`verify_alg_lemma`].
#[derive(Clone, Debug, Serialize)]
pub struct AlgLemmaReport {
    pub m: u64,
    pub r: u32,
    pub d_min: u64,
    pub d_max: u64,
    /// binom(m^r, j) = 0 mod m for all 1 <= j < d_min.
    pub min_convention_holds: bool,
    /// First j in 1..d_max where divisibility fails, when the conventions
    /// differ and the max reading over-claims.
    pub max_convention_failure: Option<AlgLemmaFailure>,
}

/// Exhaustive binomial sweep: checks binom(m^r, j) = 0 mod m for all
/// 1 <= j < d_{m,r} under the min convention, and locates the first
/// counterexample to the max convention when one exists.
pub fn verify_alg_lemma(m: u64, r: u32) -> Result<AlgLemmaReport> {
    if m < 2 || r < 1 {
        return Err(Error::Precondition(format!(
            "need m >= 2 and r >= 1, got m={m}, r={r}"
        )));
    }
    let mr = m
        .checked_pow(r)
        .filter(|&v| v <= 1_000_000)
        .ok_or_else(|| Error::Precondition(format!("need m^r <= 10^6, got m={m}, r={r}")))?;
    let factors = factorize(m);
    let divisible_by_m = |j: u64| -> bool {
        factors
            .iter()
            .all(|&(p, a)| binom_valuation(mr, j, p).unwrap() >= a)
    };
    let d_min = d_mr(m, r, DmrConvention::Min)?;
    let d_max = d_mr(m, r, DmrConvention::Max)?;
    let min_convention_holds = (1..d_min).all(divisible_by_m);
    let max_convention_failure = (1..d_max).find(|&j| !divisible_by_m(j)).map(|j| {
        let binom_mod_m = (j <= 10_000).then(|| {
            (binomial(mr, j) % BigUint::from(m)).to_u64().unwrap()
        });
        AlgLemmaFailure { j, binom_mod_m }
    });
    Ok(AlgLemmaReport {
        m,
        r,
        d_min,
        d_max,
        min_convention_holds,
        max_convention_failure,
    })
}

/// The degree bound k*s*(p^r - 1) for residue-lift compositions.
pub fn residue_degree_bound(k: u32, p: u64, r: u32, s: u32) -> Result<u64> {
    if k < 1 || r < 1 || s < 1 {
        return Err(Error::Precondition(format!(
            "need k, r, s >= 1, got k={k}, r={r}, s={s}"
        )));
    }
    Ok(k as u64 * s as u64 * (p.pow(r) - 1))
}

/// An integer-coefficient polynomial on Z^n, used as the upstairs input of
/// the residue-lift check.
#[derive(Clone, Debug)]
pub struct IntPolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, i64>,
}

impl IntPolynomial {
    pub fn new(nvars: usize) -> Self {
        IntPolynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn with_term(mut self, exponents: Vec<u32>, coeff: i64) -> Self {
        assert_eq!(exponents.len(), self.nvars);
        if coeff != 0 {
            *self.terms.entry(exponents).or_insert(0) += coeff;
        }
        self
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, point: &[u64]) -> BigInt {
        assert_eq!(point.len(), self.nvars);
        let mut acc = BigInt::zero();
        for (exps, &c) in &self.terms {
            let mut term = BigInt::from(c);
            for (&a, &x) in exps.iter().zip(point) {
                term *= BigInt::from(x).pow(a);
            }
            acc += term;
        }
        acc
    }
}

/// Report of [`verify_residue_degree`].
#[derive(Clone, Debug, Serialize)]
pub struct ResidueDegreeReport {
    pub spec: GroupSpec,
    pub p: u64,
    pub r: u32,
    pub s: u32,
    pub poly_degree: u32,
    pub bound: u64,
    pub measured_degree: u32,
}

/// Measures the degree of x -> P(|x|) / p^s on a p^r-torsion group and
/// asserts it stays within the k*s*(p^r - 1) bound. A violation is a
/// bug-class error: the bound is proven.
pub fn verify_residue_degree(
    poly: &IntPolynomial,
    spec: &GroupSpec,
    s: u32,
) -> Result<ResidueDegreeReport> {
    if poly.nvars != spec.rank() {
        return Err(Error::Precondition(format!(
            "polynomial has {} variables, group has rank {}",
            poly.nvars,
            spec.rank()
        )));
    }
    let (p, r) = prime_power_torsion(spec)?;
    let k = poly.total_degree().max(1);
    let bound = residue_degree_bound(k, p, r, s)?;
    let ps = BigInt::from(p.pow(s));
    let table = ExactTable::from_fn(spec, |x| {
        let v = poly.eval(&spec.residue_lift(x));
        UnitRational::new(v, ps.clone())
    });
    let cutoff = u32::try_from(bound).unwrap_or(u32::MAX).saturating_add(1);
    let measured = match table.degree_with_cutoff(cutoff) {
        DegreeResult::Polynomial { degree, .. } => degree,
        DegreeResult::NoFiniteDegree { .. } => {
            return Err(Error::Invariant(format!(
                "residue lift of {poly:?} on {spec} with s={s} is not polynomial below {cutoff}"
            )))
        }
    };
    if measured as u64 > bound {
        return Err(Error::Invariant(format!(
            "residue-lift degree {measured} exceeds the proven bound {bound} on {spec}"
        )));
    }
    Ok(ResidueDegreeReport {
        spec: spec.clone(),
        p,
        r,
        s,
        poly_degree: k,
        bound,
        measured_degree: measured,
    })
}

/// The prime p and exponent r such that the spec is p^r-torsion.
fn prime_power_torsion(spec: &GroupSpec) -> Result<(u64, u32)> {
    let m = spec.exponent();
    let factors = factorize(m);
    match factors.as_slice() {
        [(p, r)] => Ok((*p, *r)),
        _ => Err(Error::Precondition(format!(
            "group {spec} is not p^r-torsion (exponent {m})"
        ))),
    }
}

/// Report of [`product_degree_check`].
#[derive(Clone, Debug, Serialize)]
pub struct ProductDegreeReport {
    pub deg_f: u32,
    pub deg_g: u32,
    pub product_target_modulus: u64,
    pub deg_product: u32,
    pub holds: bool,
}

/// Realizes the tensor pairing of (1/q1)Z/Z x (1/q2)Z/Z as the bilinear
/// image (a, b) -> a*b mod gcd(q1,q2) and checks degree additivity
/// deg(f x g) <= deg f + deg g.
pub fn product_degree_check(f: &ExactTable, g: &ExactTable) -> Result<ProductDegreeReport> {
    f.same_spec(g)?;
    let q1 = f
        .denominator_lcm()
        .ok_or_else(|| Error::Precondition("denominators of f exceed u64".into()))?;
    let q2 = g
        .denominator_lcm()
        .ok_or_else(|| Error::Precondition("denominators of g exceed u64".into()))?;
    let target = num_integer::gcd(q1, q2);
    let lift = |v: &UnitRational, q: u64| -> u64 {
        let den = v.denominator_u64().unwrap();
        v.numerator().to_u64().unwrap() * (q / den)
    };
    let product = ExactTable::from_values(
        f.spec().clone(),
        f.values()
            .iter()
            .zip(g.values())
            .map(|(a, b)| {
                let ab = (lift(a, q1) as u128 * lift(b, q2) as u128 % target as u128) as u64;
                UnitRational::new(ab, target)
            })
            .collect(),
    )?;
    let deg = |t: &ExactTable| -> Result<u32> {
        match t.degree() {
            DegreeResult::Polynomial { degree, .. } => Ok(degree),
            DegreeResult::NoFiniteDegree { cutoff } => Err(Error::Precondition(format!(
                "table is not polynomial below cutoff {cutoff}"
            ))),
        }
    };
    let deg_f = deg(f)?;
    let deg_g = deg(g)?;
    let deg_product = deg(&product)?;
    Ok(ProductDegreeReport {
        deg_f,
        deg_g,
        product_target_modulus: target,
        deg_product,
        holds: deg_product <= deg_f + deg_g,
    })
}
