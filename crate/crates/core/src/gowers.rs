//! Gowers uniformity norms, Gowers–Host–Kra inner products, the U^2
//! Fourier identity, and inverse-theorem correlation search against
//! polynomial phases.
//!
//! The floating kernels accumulate with compensated summation in a fixed
//! chunk order, so results do not depend on the worker count.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Character, GroupSpec};
use crate::parallel::{map_reduce_chunks, Kahan};
use crate::polycalc::PolynomialPhase;
use crate::rational::UnitRational;
use crate::rng::SplitMix64;
use crate::table::{e, Complex, ComplexTable, FunctionTable};

/// Evaluation route for a norm request.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormMethod {
    /// Direct average over all (x, h_1..h_k) tuples.
    Naive,
    /// ||f||_{U^k}^{2^k} = E_h ||D_h f||_{U^{k-1}}^{2^{k-1}}.
    Recursive,
    /// The identity ||f||_{U^2}^4 = sum |fhat|^4; k = 2 only.
    FourierU2,
}

#[derive(Clone, Debug)]
pub struct NormRequest {
    pub f: ComplexTable,
    pub k: u32,
    pub method: NormMethod,
    /// Upper bound on the estimated number of vertex evaluations.
    pub budget: u64,
}

pub const DEFAULT_NORM_BUDGET: u64 = 2_000_000_000;

impl NormRequest {
    pub fn new(f: ComplexTable, k: u32, method: NormMethod) -> Self {
        NormRequest {
            f,
            k,
            method,
            budget: DEFAULT_NORM_BUDGET,
        }
    }
}

/// The k-th Gowers norm
/// (E_{x,h_1..h_k} D_{h_1} ... D_{h_k} f(x))^(1/2^k),
/// where D_h f(x) = f(x+h) conj(f(x)).
pub fn gowers_norm(req: &NormRequest) -> Result<f64> {
    if req.k < 1 {
        return Err(Error::Precondition("Gowers norms need k >= 1".into()));
    }
    let avg = match req.method {
        NormMethod::Naive => naive_average(&req.f, req.k, req.budget)?,
        NormMethod::Recursive => recursive_average(&req.f, req.k, req.budget)?,
        NormMethod::FourierU2 => {
            if req.k != 2 {
                return Err(Error::Precondition(format!(
                    "fourier-u2 is only valid at k = 2, got k = {}",
                    req.k
                )));
            }
            return Ok(u2_fourier(&req.f));
        }
    };
    // The average is real and nonnegative up to rounding.
    Ok(avg.max(0.0).powf(1.0 / (1u64 << req.k) as f64))
}

fn naive_cost(order: u64, k: u32) -> u128 {
    (order as u128).pow(k + 1) << k
}

/// Index addition for kernel loops: a dense table when it fits, direct
/// mixed-radix arithmetic otherwise.
enum Adder {
    Table { table: Vec<u32>, n: usize },
    Direct(GroupSpec),
}

impl Adder {
    fn for_spec(spec: &GroupSpec) -> Adder {
        let n = spec.order() as usize;
        if n <= 2048 {
            Adder::Table {
                table: spec.addition_table(),
                n,
            }
        } else {
            Adder::Direct(spec.clone())
        }
    }

    #[inline]
    fn add(&self, a: usize, b: usize) -> usize {
        match self {
            Adder::Table { table, n } => table[a * n + b] as usize,
            Adder::Direct(spec) => spec.add_index(a, b),
        }
    }
}

/// E_{x,h_1..h_k} prod_omega C^{|omega|} f(x + omega . h), the 2^k-fold
/// multiplicative derivative average.
fn naive_average(f: &ComplexTable, k: u32, budget: u64) -> Result<f64> {
    let spec = f.spec().clone();
    let n = spec.order() as usize;
    if n == 0 {
        return Ok(1.0);
    }
    let cost = naive_cost(spec.order(), k);
    if cost > budget as u128 {
        return Err(Error::Budget {
            what: format!("naive U^{k} norm on {spec}"),
            needed: cost,
            budget: budget as u128,
        });
    }
    let verts = 1usize << k;
    let tuples = n.pow(k); // h-tuples; x handled in the inner loop
    let add = Adder::for_spec(&spec);
    let mut total = Kahan::default();
    map_reduce_chunks(
        tuples,
        |range| {
            let mut acc = Kahan::default();
            let mut offsets = vec![0usize; verts];
            let mut hs = vec![0usize; k as usize];
            for t in range {
                // Decode the h-tuple, then omega . h for all omega:
                // offset[w] = offset[w minus lowest bit] + h_low.
                let mut rest = t;
                for h in hs.iter_mut() {
                    *h = rest % n;
                    rest /= n;
                }
                offsets[0] = 0;
                for w in 1..verts {
                    let low = w.trailing_zeros() as usize;
                    offsets[w] = add.add(offsets[w & (w - 1)], hs[low]);
                }
                for x in 0..n {
                    let mut prod = Complex::new(1.0, 0.0);
                    for (w, off) in offsets.iter().enumerate() {
                        let v = f.value_at_index(add.add(x, *off));
                        prod *= if (w.count_ones() & 1) == 1 {
                            v.conj()
                        } else {
                            *v
                        };
                    }
                    acc.add(prod.re);
                }
            }
            acc.value()
        },
        |part| total.add(part),
    );
    Ok(total.value() / (n as f64).powi(k as i32 + 1))
}

fn recursive_average(f: &ComplexTable, k: u32, budget: u64) -> Result<f64> {
    let spec = f.spec().clone();
    let n = spec.order() as usize;
    if n == 0 {
        return Ok(1.0);
    }
    let cost = (n as u128).pow(k) * 4;
    if cost > budget as u128 {
        return Err(Error::Budget {
            what: format!("recursive U^{k} norm on {spec}"),
            needed: cost,
            budget: budget as u128,
        });
    }
    if k == 1 {
        let m = f.mean();
        return Ok(m.norm_sqr());
    }
    let mut total = Kahan::default();
    for h in 0..n {
        let shifted: Vec<Complex> = (0..n)
            .map(|x| f.value_at_index(spec.add_index(x, h)) * f.value_at_index(x).conj())
            .collect();
        let df = FunctionTable::from_values(spec.clone(), shifted)?;
        total.add(recursive_average(&df, k - 1, budget)?);
    }
    Ok(total.value() / n as f64)
}

/// ||f||_{U^2} by the Fourier route: (sum_xi |fhat(xi)|^4)^(1/4).
pub fn u2_fourier(f: &ComplexTable) -> f64 {
    let fh = f.fourier_transform();
    let mut acc = Kahan::default();
    for z in fh.values() {
        let p = z.norm_sqr();
        acc.add(p * p);
    }
    acc.value().max(0.0).powf(0.25)
}

/// Gowers inner product of 2^n functions indexed by the vertices of the
/// n-cube: E_{x,h} prod_omega C^{|omega|} f_omega(x + omega . h).
pub fn gowers_inner_product(fs: &[ComplexTable], budget: u64) -> Result<Complex> {
    let count = fs.len();
    if count == 0 || !count.is_power_of_two() {
        return Err(Error::Precondition(format!(
            "inner product needs 2^n functions, got {count}"
        )));
    }
    let k = count.trailing_zeros();
    for f in &fs[1..] {
        fs[0].same_spec(f)?;
    }
    let spec = fs[0].spec().clone();
    let n = spec.order() as usize;
    if n == 0 {
        return Ok(Complex::new(1.0, 0.0));
    }
    let cost = naive_cost(spec.order(), k);
    if cost > budget as u128 {
        return Err(Error::Budget {
            what: format!("U^{k} inner product on {spec}"),
            needed: cost,
            budget: budget as u128,
        });
    }
    let verts = count;
    let tuples = n.pow(k);
    let add = Adder::for_spec(&spec);
    let mut total_re = Kahan::default();
    let mut total_im = Kahan::default();
    map_reduce_chunks(
        tuples,
        |range| {
            let mut re = Kahan::default();
            let mut im = Kahan::default();
            let mut offsets = vec![0usize; verts];
            let mut hs = vec![0usize; k as usize];
            for t in range {
                let mut rest = t;
                for h in hs.iter_mut() {
                    *h = rest % n;
                    rest /= n;
                }
                offsets[0] = 0;
                for w in 1..verts {
                    let low = w.trailing_zeros() as usize;
                    offsets[w] = add.add(offsets[w & (w - 1)], hs[low]);
                }
                for x in 0..n {
                    let mut prod = Complex::new(1.0, 0.0);
                    for (w, off) in offsets.iter().enumerate() {
                        let v = fs[w].value_at_index(add.add(x, *off));
                        prod *= if (w.count_ones() & 1) == 1 {
                            v.conj()
                        } else {
                            *v
                        };
                    }
                    re.add(prod.re);
                    im.add(prod.im);
                }
            }
            (re.value(), im.value())
        },
        |(r, i)| {
            total_re.add(r);
            total_im.add(i);
        },
    );
    let scale = (n as f64).powi(k as i32 + 1);
    Ok(Complex::new(
        total_re.value() / scale,
        total_im.value() / scale,
    ))
}

/// How a correlation result was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    Search,
}

/// Best polynomial-phase correlate found: the phase P maximizing (for the
/// exhaustive mode) or improving (for the heuristic search) |E f e(-P)|.
#[derive(Clone, Debug)]
pub struct CorrelationResult {
    pub phase: PolynomialPhase,
    pub correlation: f64,
    pub mode: SearchMode,
    pub candidates_examined: u64,
}

/// |E_x f(x) e(-P(x))|, the quantity both searches maximize. Also used to
/// recheck every reported result through an independent evaluation path.
pub fn correlation(f: &ComplexTable, phase: &PolynomialPhase) -> Result<f64> {
    if f.spec() != phase.spec() {
        return Err(Error::Precondition(format!(
            "function on {} but phase on {}",
            f.spec(),
            phase.spec()
        )));
    }
    let mut re = Kahan::default();
    let mut im = Kahan::default();
    for (i, x) in f.spec().elements().enumerate() {
        let z = f.value_at_index(i) * e(-phase.eval(&x)?.to_f64());
        re.add(z.re);
        im.add(z.im);
    }
    let n = f.spec().order().max(1) as f64;
    Ok(Complex::new(re.value() / n, im.value() / n).norm())
}

/// The monomial frame for a coefficient search: all binomial-basis
/// exponent tuples with 1 <= total degree <= c and a_i < d_i, plus the
/// per-point integer monomial values mod q.
struct MonomialFrame {
    exponents: Vec<Vec<u32>>,
    /// values[j][x] = prod binom(|x_i|, a_i) mod q for monomial j.
    values: Vec<Vec<u64>>,
    q: u64,
}

impl MonomialFrame {
    fn build(spec: &GroupSpec, max_degree: u32, q: u64) -> Self {
        let mut exponents = Vec::new();
        let mut stack = vec![0u32; spec.rank()];
        enumerate_exponents(spec.moduli(), max_degree, 0, &mut stack, &mut exponents);
        let values = exponents
            .iter()
            .map(|exps| {
                spec.elements()
                    .map(|x| {
                        let lift = spec.residue_lift(&x);
                        let mut m: u64 = 1;
                        for (&a, &xi) in exps.iter().zip(&lift) {
                            m = m * binom_mod(xi, a as u64, q) % q;
                            if m == 0 {
                                break;
                            }
                        }
                        m
                    })
                    .collect()
            })
            .collect();
        MonomialFrame {
            exponents,
            values,
            q,
        }
    }

    fn phase_from_coeffs(
        &self,
        spec: &GroupSpec,
        coeffs: &[u64],
        max_degree: u32,
    ) -> PolynomialPhase {
        let mut p = PolynomialPhase::new(spec.clone(), max_degree);
        for (j, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                p.set_term(self.exponents[j].clone(), UnitRational::new(c, self.q))
                    .expect("frame exponents satisfy the basis constraints");
            }
        }
        p
    }
}

fn enumerate_exponents(
    moduli: &[u64],
    remaining: u32,
    i: usize,
    stack: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if i == moduli.len() {
        if stack.iter().any(|&a| a > 0) {
            out.push(stack.clone());
        }
        return;
    }
    let cap = remaining.min((moduli[i] - 1) as u32);
    for a in 0..=cap {
        stack[i] = a;
        enumerate_exponents(moduli, remaining - a, i + 1, stack, out);
    }
    stack[i] = 0;
}

fn binom_mod(n: u64, k: u64, q: u64) -> u64 {
    use num_traits::ToPrimitive;
    (crate::polycalc::binomial(n, k) % num_bigint::BigUint::from(q))
        .to_u64()
        .unwrap()
}

/// |E f . conj(roots[acc])| for an accumulated coefficient table.
fn correlation_from_acc(f: &ComplexTable, acc: &[u64], roots: &[Complex]) -> f64 {
    let mut re = Kahan::default();
    let mut im = Kahan::default();
    for (z, &a) in f.values().iter().zip(acc) {
        let t = z * roots[a as usize].conj();
        re.add(t.re);
        im.add(t.im);
    }
    let n = f.values().len().max(1) as f64;
    Complex::new(re.value() / n, im.value() / n).norm()
}

/// Exact maximizer of |E f e(-P)| over every polynomial phase of degree
/// <= max_degree with coefficients in (1/q)Z/Z (constant term omitted: it
/// cannot change the modulus). Ties break to the lexicographically
/// smallest coefficient vector in the enumeration order.
pub fn correlate_exhaustive(
    f: &ComplexTable,
    max_degree: u32,
    q: u64,
    budget: u64,
) -> Result<CorrelationResult> {
    if q < 1 {
        return Err(Error::Precondition("denominator q must be >= 1".into()));
    }
    let spec = f.spec().clone();
    let frame = MonomialFrame::build(&spec, max_degree, q);
    let monomials = frame.exponents.len() as u32;
    let space = (q as u128).checked_pow(monomials).unwrap_or(u128::MAX);
    let cost = space.saturating_mul(spec.order().max(1) as u128);
    if cost > budget as u128 {
        return Err(Error::Budget {
            what: format!(
                "exhaustive search over {space} = {q}^{monomials} coefficient vectors on {spec}"
            ),
            needed: cost,
            budget: budget as u128,
        });
    }
    let n = spec.order() as usize;
    let roots: Vec<Complex> = (0..q).map(|t| e(t as f64 / q as f64)).collect();
    let mut coeffs = vec![0u64; monomials as usize];
    let mut acc = vec![0u64; n];
    let mut best_corr = correlation_from_acc(f, &acc, &roots);
    let mut best_coeffs = coeffs.clone();
    let mut examined: u64 = 1;
    // Odometer over coefficient vectors; each step adjusts the accumulated
    // phase table by the changed digits only.
    loop {
        let mut j = 0usize;
        loop {
            if j == coeffs.len() {
                let phase = frame.phase_from_coeffs(&spec, &best_coeffs, max_degree);
                return finish_result(f, phase, best_corr, SearchMode::Exhaustive, examined);
            }
            // Advancing digit j adds one copy of monomial j either way:
            // either c -> c+1, or the rollover q-1 -> 0 (adding the q-th
            // copy completes the cycle mod q).
            for (a, row) in acc.iter_mut().zip(&frame.values[j]) {
                *a = (*a + row) % q;
            }
            if coeffs[j] + 1 < q {
                coeffs[j] += 1;
                break;
            }
            coeffs[j] = 0;
            j += 1;
        }
        let corr = correlation_from_acc(f, &acc, &roots);
        examined += 1;
        if corr > best_corr {
            best_corr = corr;
            best_coeffs = coeffs.clone();
        }
    }
}

/// Coordinate descent over monomial coefficients with a Fourier-maximizer
/// seed and seeded random restarts. Never exceeds the exhaustive optimum;
/// when q is a multiple of every modulus and max_degree >= 1 the result is
/// at least max_xi |fhat(xi)|, because that character is one of the seeds.
pub fn correlate_search(
    f: &ComplexTable,
    max_degree: u32,
    q: u64,
    budget: u64,
    seed: u64,
) -> Result<CorrelationResult> {
    if q < 1 {
        return Err(Error::Precondition("denominator q must be >= 1".into()));
    }
    let spec = f.spec().clone();
    let frame = MonomialFrame::build(&spec, max_degree, q);
    let n = spec.order() as usize;
    let roots: Vec<Complex> = (0..q).map(|t| e(t as f64 / q as f64)).collect();
    let mut examined: u64 = 0;

    let mut starts: Vec<Vec<u64>> = vec![vec![0; frame.exponents.len()]];
    if let Some(seed_coeffs) = fourier_seed(f, &frame, &spec, q, max_degree) {
        starts.push(seed_coeffs);
    }
    let mut rng = SplitMix64::new(seed);
    for _ in 0..3 {
        starts.push(
            (0..frame.exponents.len())
                .map(|_| rng.next_below(q.max(1)))
                .collect(),
        );
    }

    let mut best_corr = -1.0f64;
    let mut best_coeffs = vec![0u64; frame.exponents.len()];
    for start in starts {
        let (corr, coeffs, steps) = descend(f, &frame, &roots, start, budget, n);
        examined += steps;
        if corr > best_corr {
            best_corr = corr;
            best_coeffs = coeffs;
        }
        if examined >= budget {
            break;
        }
    }
    let phase = frame.phase_from_coeffs(&spec, &best_coeffs, max_degree);
    finish_result(f, phase, best_corr, SearchMode::Search, examined)
}

/// Coefficients reproducing the character with the largest Fourier
/// coefficient, when representable with denominator q.
fn fourier_seed(
    f: &ComplexTable,
    frame: &MonomialFrame,
    spec: &GroupSpec,
    q: u64,
    max_degree: u32,
) -> Option<Vec<u64>> {
    if max_degree < 1 || spec.rank() == 0 {
        return None;
    }
    if spec.moduli().iter().any(|&d| !q.is_multiple_of(d)) {
        return None;
    }
    let fh = f.fourier_transform();
    let mut best = 0usize;
    let mut best_val = -1.0f64;
    for (i, z) in fh.values().iter().enumerate() {
        let v = z.norm();
        if v > best_val {
            best_val = v;
            best = i;
        }
    }
    let xi = spec.element_at(best);
    // <xi, .> = sum_i xi_i |x_i| / d_i = sum_i (xi_i q / d_i) binom(|x_i|,1) / q.
    let mut coeffs = vec![0u64; frame.exponents.len()];
    for (i, (&xc, &d)) in xi.coords().iter().zip(spec.moduli()).enumerate() {
        if xc == 0 {
            continue;
        }
        let mut exps = vec![0u32; spec.rank()];
        exps[i] = 1;
        let j = frame.exponents.iter().position(|e| *e == exps)?;
        coeffs[j] = xc * (q / d) % q;
    }
    Some(coeffs)
}

fn descend(
    f: &ComplexTable,
    frame: &MonomialFrame,
    roots: &[Complex],
    mut coeffs: Vec<u64>,
    budget: u64,
    n: usize,
) -> (f64, Vec<u64>, u64) {
    let q = frame.q;
    let mut acc = vec![0u64; n];
    for (j, &c) in coeffs.iter().enumerate() {
        if c != 0 {
            for (a, row) in acc.iter_mut().zip(&frame.values[j]) {
                *a = (*a + c * row) % q;
            }
        }
    }
    let mut best = correlation_from_acc(f, &acc, roots);
    let mut steps: u64 = 1;
    loop {
        let mut improved = false;
        for j in 0..coeffs.len() {
            let current = coeffs[j];
            let mut best_c = current;
            let mut best_here = best;
            // Walk this coefficient through all q values by +1 steps.
            let mut trial = acc.clone();
            for step in 1..q {
                for (a, row) in trial.iter_mut().zip(&frame.values[j]) {
                    *a = (*a + row) % q;
                }
                let corr = correlation_from_acc(f, &trial, roots);
                steps += 1;
                if corr > best_here {
                    best_here = corr;
                    best_c = (current + step) % q;
                }
                if steps >= budget {
                    break;
                }
            }
            if best_c != current {
                let delta = (best_c + q - current) % q;
                for (a, row) in acc.iter_mut().zip(&frame.values[j]) {
                    *a = (*a + delta * row) % q;
                }
                coeffs[j] = best_c;
                best = best_here;
                improved = true;
            }
            if steps >= budget {
                return (best, coeffs, steps);
            }
        }
        if !improved {
            return (best, coeffs, steps);
        }
    }
}

/// Recomputes the claimed correlation through the independent evaluation
/// path and enforces the 1e-12 agreement invariant.
fn finish_result(
    f: &ComplexTable,
    phase: PolynomialPhase,
    claimed: f64,
    mode: SearchMode,
    candidates_examined: u64,
) -> Result<CorrelationResult> {
    let recomputed = correlation(f, &phase)?;
    if (recomputed - claimed).abs() > 1e-12 {
        return Err(Error::Invariant(format!(
            "search claimed correlation {claimed} but independent recomputation gives {recomputed}"
        )));
    }
    Ok(CorrelationResult {
        phase,
        correlation: recomputed,
        mode,
        candidates_examined,
    })
}

/// Certificate for the U^2 inverse theorem: the character with the largest
/// Fourier coefficient, which for 1-bounded f always satisfies
/// |fhat(xi)| >= ||f||_{U^2}^2.
pub fn u2_inverse_certificate(f: &ComplexTable) -> Result<(Character, f64)> {
    if f.sup_norm() > 1.0 + 1e-12 {
        return Err(Error::Precondition(format!(
            "u2 certificate needs a 1-bounded function, sup |f| = {}",
            f.sup_norm()
        )));
    }
    let fh = f.fourier_transform();
    let mut best = 0usize;
    let mut best_val = -1.0f64;
    for (i, z) in fh.values().iter().enumerate() {
        let v = z.norm();
        if v > best_val {
            best_val = v;
            best = i;
        }
    }
    Ok((Character(f.spec().element_at(best)), best_val))
}

/// Report of [`tensor_multiplicativity_check`].
#[derive(Clone, Debug, Serialize)]
pub struct TensorNormReport {
    pub k: u32,
    pub norm_left: f64,
    pub norm_right: f64,
    pub norm_product: f64,
    pub difference: f64,
}

/// For f(x,y) = f_p(x) f_q(y) on G_p x G_q the Gowers norm factors:
/// ||f||_{U^k} = ||f_p||_{U^k} ||f_q||_{U^k}.
pub fn tensor_multiplicativity_check(
    f_left: &ComplexTable,
    f_right: &ComplexTable,
    k: u32,
    budget: u64,
) -> Result<TensorNormReport> {
    let product_spec = f_left.spec().product(f_right.spec());
    let left_order = f_left.spec().order() as usize;
    // In the canonical enumeration of the product, the left block's index
    // is the low part and the right block's the high part.
    let tensor = ComplexTable::from_values(
        product_spec,
        (0..(f_left.values().len() * f_right.values().len()))
            .map(|i| f_left.value_at_index(i % left_order) * f_right.value_at_index(i / left_order))
            .collect(),
    )?;
    let norm_of = |f: &ComplexTable| {
        gowers_norm(&NormRequest {
            f: f.clone(),
            k,
            method: NormMethod::Naive,
            budget,
        })
    };
    let norm_left = norm_of(f_left)?;
    let norm_right = norm_of(f_right)?;
    let norm_product = norm_of(&tensor)?;
    Ok(TensorNormReport {
        k,
        norm_left,
        norm_right,
        norm_product,
        difference: (norm_product - norm_left * norm_right).abs(),
    })
}

/// The explicit degree C(k,m) = k binom(k,2) sup_{p|m} p^v(p^v - 1)
/// (v = nu_p(m)) that the inverse theorem's argument permits; exposed as
/// the CLI's default search degree.
pub fn gowers_main_degree(k: u32, m: u64) -> u64 {
    let choose2 = (k as u64) * (k as u64).saturating_sub(1) / 2;
    let sup = crate::group::factorize(m)
        .into_iter()
        .map(|(p, a)| {
            let pv = p.pow(a);
            pv * (pv - 1)
        })
        .max()
        .unwrap_or(0);
    (k as u64) * choose2 * sup
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> GroupSpec {
        GroupSpec::parse(s).unwrap()
    }

    fn norm(f: &ComplexTable, k: u32, method: NormMethod) -> f64 {
        gowers_norm(&NormRequest::new(f.clone(), k, method)).unwrap()
    }

    fn indicator(s: &str) -> ComplexTable {
        let g = spec(s);
        ComplexTable::from_fn(&g, |x| {
            if x.coords().iter().all(|&c| c == 0) {
                Complex::new(1.0, 0.0)
            } else {
                Complex::new(0.0, 0.0)
            }
        })
    }

    fn random_table(s: &str, seed: u64) -> ComplexTable {
        let g = spec(s);
        let mut rng = SplitMix64::new(seed);
        ComplexTable::from_fn(&g, |_| {
            let r = rng.next_f64().sqrt();
            let t = 2.0 * std::f64::consts::PI * rng.next_f64();
            Complex::new(r * t.cos(), r * t.sin())
        })
    }

    #[test]
    fn constant_one_has_norm_one() {
        let g = spec("2,3");
        let f = ComplexTable::constant(&g, Complex::new(1.0, 0.0));
        for k in 1..=3 {
            assert!((norm(&f, k, NormMethod::Naive) - 1.0).abs() < 1e-12);
            assert!((norm(&f, k, NormMethod::Recursive) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_point_exact_value() {
        // ||(1,0)||_{U^2(Z/2)} = (1/8)^{1/4}, by brute force and by Fourier.
        let f = indicator("2");
        let expect = 0.125f64.powf(0.25);
        assert!((norm(&f, 2, NormMethod::Naive) - expect).abs() < 1e-10);
        assert!((norm(&f, 2, NormMethod::Recursive) - expect).abs() < 1e-10);
        assert!((u2_fourier(&f) - expect).abs() < 1e-10);
    }

    #[test]
    fn methods_agree_on_random_tables() {
        for (i, s) in ["2", "3", "2,2", "6", "2,4"].iter().enumerate() {
            let f = random_table(s, 100 + i as u64);
            for k in 1..=3 {
                let a = norm(&f, k, NormMethod::Naive);
                let b = norm(&f, k, NormMethod::Recursive);
                assert!((a - b).abs() < 1e-9, "{s} k={k}: {a} vs {b}");
            }
            let a = norm(&f, 2, NormMethod::Naive);
            assert!((a - u2_fourier(&f)).abs() < 1e-9);
        }
    }

    #[test]
    fn norm_power_matches_average() {
        let f = random_table("2,4", 9);
        for k in 1..=3u32 {
            let nrm = norm(&f, k, NormMethod::Naive);
            let avg = naive_average(&f, k, DEFAULT_NORM_BUDGET).unwrap();
            assert!((nrm.powi(1 << k) - avg).abs() < 1e-10);
        }
    }

    #[test]
    fn polynomial_phase_has_full_norm() {
        // The norm is 1 at U^{deg+1} for the measured degree; note the
        // monomial total exponent can undercount it (binom(|x|,2)/4 on Z/4
        // has degree 4, not 2).
        let g = spec("2,4");
        let mut p = PolynomialPhase::new(g.clone(), 2);
        p.set_term(vec![0, 2], UnitRational::new(1, 4)).unwrap();
        p.set_term(vec![1, 1], UnitRational::new(1, 2)).unwrap();
        let table = p.to_table();
        let deg = table.degree().degree().unwrap();
        assert_eq!(deg, 4);
        let f = table.to_phase();
        assert!((norm(&f, deg + 1, NormMethod::Recursive) - 1.0).abs() < 1e-10);
        // One degree lower the norm must fall short of 1.
        assert!(norm(&f, deg, NormMethod::Recursive) < 1.0 - 1e-6);
    }

    #[test]
    fn inner_product_specializes_to_norm() {
        let f = random_table("2,3", 7);
        let fs: Vec<ComplexTable> = (0..4).map(|_| f.clone()).collect();
        let ip = gowers_inner_product(&fs, DEFAULT_NORM_BUDGET).unwrap();
        let n2 = norm(&f, 2, NormMethod::Naive);
        assert!((ip.re - n2.powi(4)).abs() < 1e-10);
        assert!(ip.im.abs() < 1e-10);

        let g = spec("2");
        let ones: Vec<ComplexTable> = (0..4)
            .map(|_| ComplexTable::constant(&g, Complex::new(1.0, 0.0)))
            .collect();
        let ip = gowers_inner_product(&ones, DEFAULT_NORM_BUDGET).unwrap();
        assert!((ip - Complex::new(1.0, 0.0)).norm() < 1e-12);

        let mut with_zero = ones.clone();
        with_zero[2] = ComplexTable::constant(&g, Complex::new(0.0, 0.0));
        let ip = gowers_inner_product(&with_zero, DEFAULT_NORM_BUDGET).unwrap();
        assert!(ip.norm() < 1e-12);

        assert!(gowers_inner_product(&ones[..3], DEFAULT_NORM_BUDGET).is_err());
    }

    #[test]
    fn inner_product_eighth_on_two_points() {
        let f = indicator("2");
        let fs: Vec<ComplexTable> = (0..4).map(|_| f.clone()).collect();
        let ip = gowers_inner_product(&fs, DEFAULT_NORM_BUDGET).unwrap();
        assert!((ip.re - 0.125).abs() < 1e-12);
    }

    #[test]
    fn budget_errors_name_the_cost() {
        let f = random_table("2,4", 3);
        let mut req = NormRequest::new(f, 3, NormMethod::Naive);
        req.budget = 10;
        match gowers_norm(&req) {
            Err(Error::Budget { needed, budget, .. }) => assert!(needed > budget),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn exhaustive_recovers_planted_phase() {
        let g = spec("2,4");
        let mut p = PolynomialPhase::new(g.clone(), 2);
        p.set_term(vec![1, 1], UnitRational::new(1, 2)).unwrap();
        p.set_term(vec![0, 1], UnitRational::new(3, 4)).unwrap();
        let f = p.to_table().to_phase();
        let res = correlate_exhaustive(&f, 2, 4, DEFAULT_NORM_BUDGET).unwrap();
        assert!((res.correlation - 1.0).abs() < 1e-10);

        let zero = ComplexTable::constant(&g, Complex::new(0.0, 0.0));
        let res = correlate_exhaustive(&zero, 1, 2, DEFAULT_NORM_BUDGET).unwrap();
        assert!(res.correlation.abs() < 1e-12);
    }

    #[test]
    fn exhaustive_two_point_sign_function() {
        let g = spec("2");
        let f =
            ComplexTable::from_values(g, vec![Complex::new(1.0, 0.0), Complex::new(-1.0, 0.0)])
                .unwrap();
        let res = correlate_exhaustive(&f, 1, 2, DEFAULT_NORM_BUDGET).unwrap();
        assert!((res.correlation - 1.0).abs() < 1e-12);
        // The maximizer is the degree-1 character |x|/2.
        assert_eq!(res.phase.terms().len(), 1);
        assert_eq!(res.phase.terms()[&vec![1]], UnitRational::new(1, 2));
    }

    #[test]
    fn search_is_bounded_by_exhaustive_and_seeded_by_fourier() {
        for seed in [1u64, 2, 3] {
            let f = random_table("2,4", seed);
            let ex = correlate_exhaustive(&f, 1, 4, DEFAULT_NORM_BUDGET).unwrap();
            let se = correlate_search(&f, 1, 4, 1_000_000, seed).unwrap();
            assert!(se.correlation <= ex.correlation + 1e-12);
            let fh_max = f
                .fourier_transform()
                .values()
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            assert!(se.correlation >= fh_max - 1e-12);
        }
    }

    #[test]
    fn search_deterministic_and_exact_on_planted_input() {
        let g = spec("2,2");
        let mut p = PolynomialPhase::new(g.clone(), 2);
        p.set_term(vec![1, 1], UnitRational::new(1, 2)).unwrap();
        let f = p.to_table().to_phase();
        let a = correlate_search(&f, 2, 2, 100_000, 99).unwrap();
        let b = correlate_search(&f, 2, 2, 100_000, 99).unwrap();
        assert_eq!(a.correlation.to_bits(), b.correlation.to_bits());
        assert_eq!(a.phase, b.phase);
        assert!((a.correlation - 1.0).abs() < 1e-10);
    }

    #[test]
    fn u2_certificate_examples() {
        // A character phase certifies itself with correlation 1.
        let g = spec("3");
        let xi = Character(g.element(&[1]).unwrap());
        let f =
            ComplexTable::from_fn(&g, |x| e(g.character_pairing(&xi, x).unwrap().to_f64()));
        let (found, corr) = u2_inverse_certificate(&f).unwrap();
        assert_eq!(found, xi);
        assert!((corr - 1.0).abs() < 1e-10);

        // f = (1,0) on Z/2: max = 1/2 >= ||f||_{U^2}^2 = (1/8)^{1/2}.
        let f = indicator("2");
        let (_, corr) = u2_inverse_certificate(&f).unwrap();
        assert!((corr - 0.5).abs() < 1e-12);
        assert!(corr >= 0.125f64.sqrt() - 1e-9);

        let g = spec("2");
        let unbounded = ComplexTable::constant(&g, Complex::new(2.0, 0.0));
        assert!(u2_inverse_certificate(&unbounded).is_err());

        let zero = ComplexTable::constant(&g, Complex::new(0.0, 0.0));
        let (_, corr) = u2_inverse_certificate(&zero).unwrap();
        assert!(corr.abs() < 1e-12);
    }

    #[test]
    fn tensor_norms_multiply() {
        // Constant right factor: product norm equals the left norm.
        let f_left = random_table("2", 5);
        let ones = ComplexTable::constant(&spec("3"), Complex::new(1.0, 0.0));
        let rep =
            tensor_multiplicativity_check(&f_left, &ones, 2, DEFAULT_NORM_BUDGET).unwrap();
        assert!(rep.difference < 1e-10);
        assert!((rep.norm_product - rep.norm_left).abs() < 1e-10);

        let f_right = random_table("3", 6);
        for k in 1..=2 {
            let rep =
                tensor_multiplicativity_check(&f_left, &f_right, k, DEFAULT_NORM_BUDGET).unwrap();
            assert!(rep.difference < 1e-8, "k={k}: {rep:?}");
        }
    }

    #[test]
    fn norm_invariances() {
        let g = spec("2,4");
        let f = random_table("2,4", 21);
        // Shift invariance.
        for a in g.elements() {
            let shifted = f.translate(&a).unwrap();
            for k in 1..=3 {
                let d = (norm(&f, k, NormMethod::Recursive)
                    - norm(&shifted, k, NormMethod::Recursive))
                .abs();
                assert!(d < 1e-10, "shift {a} k={k}");
            }
        }
        // Phase invariance under character modulation for k >= 2.
        for xi in g.characters() {
            let modulated = ComplexTable::from_fn(&g, |x| {
                f.value(x) * e(g.character_pairing(&xi, x).unwrap().to_f64())
            });
            for k in 2..=3 {
                let d = (norm(&f, k, NormMethod::Recursive)
                    - norm(&modulated, k, NormMethod::Recursive))
                .abs();
                assert!(d < 1e-9, "char {xi} k={k}");
            }
        }
        // And under any polynomial phase multiplier of degree < k.
        let mut p = PolynomialPhase::new(g.clone(), 2);
        p.set_term(vec![1, 1], UnitRational::new(1, 2)).unwrap();
        p.set_term(vec![0, 1], UnitRational::new(1, 4)).unwrap();
        let table = p.to_table();
        let deg = table.degree().degree().unwrap();
        assert_eq!(deg, 2);
        let phase = table.to_phase();
        let modulated = ComplexTable::from_values(
            g.clone(),
            f.values()
                .iter()
                .zip(phase.values())
                .map(|(a, b)| a * b)
                .collect(),
        )
        .unwrap();
        for k in (deg + 1)..=(deg + 2) {
            let d =
                (norm(&f, k, NormMethod::Recursive) - norm(&modulated, k, NormMethod::Recursive))
                    .abs();
            assert!(d < 1e-9, "degree-{deg} phase multiplier at k={k}");
        }
    }

    #[test]
    fn monotonicity_in_k() {
        for seed in 0..5u64 {
            let f = random_table("2,4", 40 + seed);
            let mut prev = norm(&f, 1, NormMethod::Recursive);
            for k in 2..=4 {
                let cur = norm(&f, k, NormMethod::Recursive);
                assert!(prev <= cur + 1e-9, "seed {seed} k={k}: {prev} > {cur}");
                prev = cur;
            }
        }
    }

    #[test]
    fn fourier_u2_method_gate() {
        let f = indicator("2");
        assert!(gowers_norm(&NormRequest::new(f.clone(), 3, NormMethod::FourierU2)).is_err());
        let v = gowers_norm(&NormRequest::new(f, 2, NormMethod::FourierU2)).unwrap();
        assert!((v - 0.125f64.powf(0.25)).abs() < 1e-10);
    }

    #[test]
    fn cmk_formula() {
        // k binom(k,2) sup p^v (p^v - 1): k=2, m=2 -> 2*1*2*1 = 4.
        assert_eq!(gowers_main_degree(2, 2), 4);
        assert_eq!(gowers_main_degree(1, 2), 0);
        assert_eq!(gowers_main_degree(2, 12), 2 * 12); // p^v = 4: 4*3 = 12
        assert_eq!(gowers_main_degree(3, 3), 3 * 3 * 6);
    }
}
