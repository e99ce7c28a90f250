//! Symmetric multilinear forms on a finite abelian group, the map sending
//! a degree-k polynomial to its constant k-fold derivative, and the finite
//! universal system realizing k! times a prescribed form in the k-th
//! discrete spectrum.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::rational::UnitRational;
use crate::rng::SplitMix64;
use crate::table::ExactTable;

/// A totally symmetric multilinear form b: Gamma^m -> T, stored by its
/// values on non-decreasing generator index tuples. Symmetry is by
/// construction; multilinearity extends by expansion over coordinates.
/// Every stored value is killed by each of its slots' moduli.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymForm {
    spec: GroupSpec,
    order: u32,
    values: BTreeMap<Vec<usize>, UnitRational>,
}

/// All non-decreasing index tuples of the given length over 0..rank.
pub fn generator_tuples(rank: usize, len: u32) -> Vec<Vec<usize>> {
    fn go(rank: usize, len: u32, from: usize, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if stack.len() == len as usize {
            out.push(stack.clone());
            return;
        }
        for i in from..rank {
            stack.push(i);
            go(rank, len, i, stack, out);
            stack.pop();
        }
    }
    let mut out = Vec::new();
    go(rank, len, 0, &mut Vec::new(), &mut out);
    out
}

/// The torsion bound for a tuple's value: gcd of the slot moduli. Any
/// value at this tuple lies in (1/g)Z/Z.
pub fn tuple_torsion(spec: &GroupSpec, tuple: &[usize]) -> u64 {
    tuple
        .iter()
        .fold(0u64, |g, &i| num_integer::gcd(g, spec.moduli()[i]))
}

impl SymForm {
    /// Order-m form from generator-tuple values; indices are sorted into
    /// canonical non-decreasing order. Missing tuples are zero.
    pub fn new(
        spec: GroupSpec,
        order: u32,
        entries: impl IntoIterator<Item = (Vec<usize>, UnitRational)>,
    ) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (mut tuple, v) in entries {
            if tuple.len() != order as usize {
                return Err(Error::Precondition(format!(
                    "tuple {tuple:?} has length {}, form has order {order}",
                    tuple.len()
                )));
            }
            if tuple.iter().any(|&i| i >= spec.rank()) {
                return Err(Error::Precondition(format!(
                    "tuple {tuple:?} indexes past rank {}",
                    spec.rank()
                )));
            }
            tuple.sort_unstable();
            if v.is_zero() {
                continue;
            }
            for &i in &tuple {
                if !v.scale(spec.moduli()[i] as i64).is_zero() {
                    return Err(Error::Precondition(format!(
                        "value {v} at {tuple:?} is not killed by modulus {}",
                        spec.moduli()[i]
                    )));
                }
            }
            values.insert(tuple, v);
        }
        Ok(SymForm {
            spec,
            order,
            values,
        })
    }

    pub fn zero(spec: GroupSpec, order: u32) -> Self {
        SymForm {
            spec,
            order,
            values: BTreeMap::new(),
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn entries(&self) -> &BTreeMap<Vec<usize>, UnitRational> {
        &self.values
    }

    /// Value on a generator tuple (any order; sorted internally).
    pub fn on_generators(&self, tuple: &[usize]) -> UnitRational {
        let mut t = tuple.to_vec();
        t.sort_unstable();
        self.values
            .get(&t)
            .cloned()
            .unwrap_or_else(UnitRational::zero)
    }

    /// Multilinear evaluation at arbitrary arguments, by expansion over
    /// the coordinate decompositions of each argument.
    pub fn eval(&self, args: &[GroupElement]) -> Result<UnitRational> {
        if args.len() != self.order as usize {
            return Err(Error::Precondition(format!(
                "form of order {} applied to {} arguments",
                self.order,
                args.len()
            )));
        }
        for a in args {
            if !self.spec.contains(a) {
                return Err(Error::Precondition(format!(
                    "argument {a} does not belong to {}",
                    self.spec
                )));
            }
        }
        if self.order == 0 {
            return Ok(self.on_generators(&[]));
        }
        let rank = self.spec.rank();
        if rank == 0 {
            return Ok(UnitRational::zero());
        }
        let m = self.order as usize;
        let mut acc = UnitRational::zero();
        let mut idx = vec![0usize; m];
        loop {
            let mut coeff = BigInt::from(1);
            for (j, &i) in idx.iter().enumerate() {
                coeff *= BigInt::from(args[j].coords()[i]);
            }
            if coeff != BigInt::from(0) {
                let v = self.on_generators(&idx);
                if !v.is_zero() {
                    acc = &acc + &v.scale(coeff);
                }
            }
            let mut j = 0;
            loop {
                if j == m {
                    return Ok(acc);
                }
                idx[j] += 1;
                if idx[j] < rank {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
        }
    }

    /// b(gamma repeated j times, e_{t_1}, .., e_{t_r}): the partial
    /// evaluation the universal shift formula needs.
    fn eval_partial(&self, gamma: &GroupElement, j: u32, rest: &[usize]) -> UnitRational {
        debug_assert_eq!(j as usize + rest.len(), self.order as usize);
        if j == 0 {
            return self.on_generators(rest);
        }
        let rank = self.spec.rank();
        if rank == 0 {
            return UnitRational::zero();
        }
        let mut acc = UnitRational::zero();
        let mut idx = vec![0usize; j as usize];
        loop {
            let mut coeff: i128 = 1;
            for &i in idx.iter() {
                coeff *= gamma.coords()[i] as i128;
            }
            if coeff != 0 {
                let mut tuple: Vec<usize> = idx.clone();
                tuple.extend_from_slice(rest);
                let v = self.on_generators(&tuple);
                if !v.is_zero() {
                    acc = &acc + &v.scale(BigInt::from(coeff));
                }
            }
            let mut c = 0;
            loop {
                if c == idx.len() {
                    return acc;
                }
                idx[c] += 1;
                if idx[c] < rank {
                    break;
                }
                idx[c] = 0;
                c += 1;
            }
        }
    }

    /// Per-slot division: a form b' with n*b' = b, each entry divided
    /// within its own torsion subgroup, or None when some entry is not
    /// divisible there.
    pub fn divide(&self, n: u64) -> Option<SymForm> {
        if n == 0 {
            return None;
        }
        let mut values = BTreeMap::new();
        for (tuple, v) in &self.values {
            let g = tuple_torsion(&self.spec, tuple);
            let den = v.denominator_u64()?;
            let r = v.numerator().to_u64()? * (g / den);
            let x = (0..g).find(|&x| (n % g) * x % g == r % g)?;
            values.insert(tuple.clone(), UnitRational::new(x, g));
        }
        Some(SymForm {
            spec: self.spec.clone(),
            order: self.order,
            values,
        })
    }
}

/// Enumerates all of SML_m(Gamma, T) for m >= 1: one residue choice per
/// non-decreasing generator tuple, within that tuple's torsion subgroup.
pub fn enumerate_forms(spec: &GroupSpec, order: u32, budget: u64) -> Result<Vec<SymForm>> {
    if order == 0 {
        return Err(Error::Precondition(
            "SML_0 = T is infinite; enumerate only positive orders".into(),
        ));
    }
    let tuples = generator_tuples(spec.rank(), order);
    let radices: Vec<u64> = tuples
        .iter()
        .map(|t| tuple_torsion(spec, t).max(1))
        .collect();
    let mut count: u128 = 1;
    for &r in &radices {
        count = count.saturating_mul(r as u128);
    }
    if count > budget as u128 {
        return Err(Error::Budget {
            what: format!("enumerating SML_{order}({spec})"),
            needed: count,
            budget: budget as u128,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut digits = vec![0u64; tuples.len()];
    loop {
        let entries: Vec<(Vec<usize>, UnitRational)> = tuples
            .iter()
            .zip(&digits)
            .zip(&radices)
            .filter(|((_, &d), _)| d != 0)
            .map(|((t, &d), &r)| (t.clone(), UnitRational::new(d, r)))
            .collect();
        out.push(SymForm::new(spec.clone(), order, entries)?);
        let mut j = 0;
        loop {
            if j == digits.len() {
                return Ok(out);
            }
            digits[j] += 1;
            if digits[j] < radices[j] {
                break;
            }
            digits[j] = 0;
            j += 1;
        }
    }
}

/// Structured failure of [`nabla_k`]: the offending generator tuple and a
/// point where its derivative differs from the value at zero.
#[derive(Clone, Debug)]
pub struct NablaFailure {
    pub tuple: Vec<usize>,
    pub witness: GroupElement,
}

/// Result of [`nabla_k`]: the symmetric form, or a non-constancy witness.
pub type NablaResult = std::result::Result<SymForm, NablaFailure>;

/// Computes the k-fold generator derivatives of an exact table and, when
/// each is constant, packages them as the symmetric multilinear form they
/// define. This succeeds exactly when the table has degree <= k; the
/// kernel of the resulting map is the tables of degree <= k-1.
pub fn nabla_k(p: &ExactTable, k: u32) -> Result<NablaResult> {
    let spec = p.spec().clone();
    let mut entries = Vec::new();
    for tuple in generator_tuples(spec.rank(), k) {
        let mut table = p.clone();
        for &i in &tuple {
            table = table.derivative(&spec.generator(i))?;
        }
        let base = table.value_at_index(0).clone();
        if let Some(idx) = (0..table.values().len()).find(|&i| *table.value_at_index(i) != base) {
            return Ok(Err(NablaFailure {
                tuple,
                witness: spec.element_at(idx),
            }));
        }
        entries.push((tuple, base));
    }
    Ok(Ok(SymForm::new(spec, k, entries)?))
}

/// The finite universal system attached to a form b of order k: states are
/// tuples (b_0, .., b_{k-1}, b) of forms of each order below k plus the
/// fixed top form, and the shift mixes higher components into lower ones
/// through binomial weights. The scalar component b_0 is truncated to the
/// finite subgroup (1/N)Z/Z, N the lcm of every torsion denominator
/// reachable from b; orbits never leave it, so the pointwise identities
/// checked here see no truncation.
#[derive(Clone)]
pub struct UniversalSystem {
    gamma: GroupSpec,
    k: u32,
    b: SymForm,
    /// Slot layout: (order i, tuple) for i = 0..k; order 0 is the single
    /// scalar slot and always comes first.
    slots: Vec<(u32, Vec<usize>)>,
    /// Residue modulus per slot; slot value r means r / modulus in T.
    slot_moduli: Vec<u64>,
    state_count: u64,
    scalar_modulus: u64,
}

impl UniversalSystem {
    pub fn gamma(&self) -> &GroupSpec {
        &self.gamma
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn form(&self) -> &SymForm {
        &self.b
    }

    pub fn state_count(&self) -> u64 {
        self.state_count
    }

    pub fn scalar_modulus(&self) -> u64 {
        self.scalar_modulus
    }

    pub fn state_at(&self, mut idx: u64) -> Vec<u64> {
        self.slot_moduli
            .iter()
            .map(|&m| {
                let r = idx % m;
                idx /= m;
                r
            })
            .collect()
    }

    pub fn index_of_state(&self, state: &[u64]) -> u64 {
        let mut idx = 0u64;
        for (&r, &m) in state.iter().zip(&self.slot_moduli).rev() {
            idx = idx * m + r;
        }
        idx
    }

    /// The state component of order i, reconstructed as a SymForm.
    pub fn component(&self, state: &[u64], order: u32) -> SymForm {
        let entries: Vec<(Vec<usize>, UnitRational)> = self
            .slots
            .iter()
            .zip(state)
            .zip(&self.slot_moduli)
            .filter(|(((i, _), _), _)| *i == order)
            .map(|(((_, t), &r), &m)| (t.clone(), UnitRational::new(r, m)))
            .collect();
        SymForm::new(self.gamma.clone(), order, entries).expect("slot residues satisfy torsion")
    }

    /// T^gamma: each component of order i gains binom(k-i, j) copies of
    /// the order-(i+j) component partially evaluated at gamma^(x j).
    pub fn shift(&self, state: &[u64], gamma: &GroupElement) -> Vec<u64> {
        let k = self.k;
        let mut next = state.to_vec();
        for (s, (i, tuple)) in self.slots.iter().enumerate() {
            let m = self.slot_moduli[s];
            if m == 1 {
                continue;
            }
            let mut add: u64 = 0;
            for j in 1..=(k - i) {
                let weight = (crate::polycalc::binomial((k - i) as u64, j as u64)
                    % num_bigint::BigUint::from(m))
                .to_u64()
                .unwrap();
                if weight == 0 {
                    continue;
                }
                let source_order = i + j;
                let v = if source_order == k {
                    self.b.eval_partial(gamma, j, tuple)
                } else {
                    self.component(state, source_order)
                        .eval_partial(gamma, j, tuple)
                };
                // v lies in (1/g)Z/Z for g dividing this slot's modulus.
                let den = v.denominator_u64().expect("torsion denominators fit u64");
                debug_assert_eq!(m % den, 0);
                let num = v.numerator().to_u64().unwrap();
                add = (add + weight * (num * (m / den) % m)) % m;
            }
            next[s] = (state[s] + add) % m;
        }
        next
    }

    /// The shift is affine in the state residues: precomputing its integer
    /// matrix once per gamma makes permutation sweeps cheap. The exact
    /// rational route in [`UniversalSystem::shift`] stays as the reference
    /// the matrix is tested against.
    pub fn shift_matrix(&self, gamma: &GroupElement) -> ShiftMatrix {
        let k = self.k;
        let nslots = self.slots.len();
        let slot_index: BTreeMap<(u32, Vec<usize>), usize> = self
            .slots
            .iter()
            .enumerate()
            .map(|(s, (i, t))| ((*i, t.clone()), s))
            .collect();
        let rank = self.gamma.rank();
        let mut coeff = vec![vec![0u64; nslots]; nslots];
        let mut constant = vec![0u64; nslots];
        for (s, (i, tuple)) in self.slots.iter().enumerate() {
            let m = self.slot_moduli[s];
            if m == 1 {
                continue;
            }
            for j in 1..=(k - i) {
                let weight = (crate::polycalc::binomial((k - i) as u64, j as u64)
                    % num_bigint::BigUint::from(m))
                .to_u64()
                .unwrap();
                if weight == 0 {
                    continue;
                }
                // Ordered j-tuples of generator indices expand gamma^(x j).
                let mut idx = vec![0usize; j as usize];
                loop {
                    let mut gcoeff: u64 = 1;
                    for &l in &idx {
                        gcoeff = gcoeff * (gamma.coords()[l] % m) % m;
                    }
                    if gcoeff != 0 {
                        let mut key: Vec<usize> = idx.clone();
                        key.extend_from_slice(tuple);
                        key.sort_unstable();
                        let source_order = i + j;
                        let w = weight * gcoeff % m;
                        if source_order == k {
                            // Fixed top form contributes to the constant.
                            let v = self.b.on_generators(&key);
                            if !v.is_zero() {
                                let den = v.denominator_u64().unwrap();
                                let num = v.numerator().to_u64().unwrap();
                                constant[s] =
                                    (constant[s] + w * (num * (m / den) % m)) % m;
                            }
                        } else {
                            let src = slot_index[&(source_order, key)];
                            let g_src = self.slot_moduli[src];
                            // r_src/g_src = r_src (m/g_src) / m.
                            coeff[s][src] = (coeff[s][src] + w * (m / g_src)) % m;
                        }
                    }
                    let mut c = 0;
                    loop {
                        if c == idx.len() {
                            break;
                        }
                        idx[c] += 1;
                        if idx[c] < rank {
                            break;
                        }
                        idx[c] = 0;
                        c += 1;
                    }
                    if idx.iter().all(|&x| x == 0) {
                        break;
                    }
                }
            }
        }
        ShiftMatrix {
            moduli: self.slot_moduli.clone(),
            coeff,
            constant,
        }
    }

    /// Shift as a permutation table over all states.
    pub fn shift_permutation(&self, gamma: &GroupElement) -> Vec<u32> {
        let matrix = self.shift_matrix(gamma);
        let mut state = vec![0u64; self.slot_moduli.len()];
        let mut out = Vec::with_capacity(self.state_count as usize);
        loop {
            out.push(self.index_of_state(&matrix.apply(&state)) as u32);
            let mut j = 0;
            loop {
                if j == state.len() {
                    return out;
                }
                state[j] += 1;
                if state[j] < self.slot_moduli[j] {
                    break;
                }
                state[j] = 0;
                j += 1;
            }
        }
    }

    /// The scalar coordinate b_0 of a state, as an exact circle value.
    pub fn scalar(&self, state: &[u64]) -> UnitRational {
        UnitRational::new(state[0], self.scalar_modulus)
    }
}

/// The integer form of a universal shift: per slot, an affine map
/// new[s] = state[s] + constant[s] + sum_src coeff[s][src] state[src],
/// everything mod the slot modulus.
#[derive(Clone, Debug)]
pub struct ShiftMatrix {
    moduli: Vec<u64>,
    coeff: Vec<Vec<u64>>,
    constant: Vec<u64>,
}

impl ShiftMatrix {
    pub fn apply(&self, state: &[u64]) -> Vec<u64> {
        (0..state.len())
            .map(|s| {
                let m = self.moduli[s];
                if m == 1 {
                    return 0;
                }
                let mut acc = state[s] + self.constant[s];
                for (src, &c) in self.coeff[s].iter().enumerate() {
                    if c != 0 {
                        acc += c * state[src];
                    }
                }
                acc % m
            })
            .collect()
    }
}

/// Builds the universal system for a form of order k >= 1.
pub fn build_universal_system(b: &SymForm) -> Result<UniversalSystem> {
    let k = b.order();
    if k < 1 {
        return Err(Error::Precondition(
            "universal system needs a form of order k >= 1".into(),
        ));
    }
    let gamma = b.spec().clone();
    // N = lcm of the torsion of every tuple of every arity 1..k; all
    // increments to the scalar slot lie in (1/N)Z/Z.
    let mut scalar_modulus: u64 = 1;
    for i in 1..=k {
        for t in generator_tuples(gamma.rank(), i) {
            let g = tuple_torsion(&gamma, &t);
            if g > 0 {
                scalar_modulus = num_integer::lcm(scalar_modulus, g);
            }
        }
    }
    let mut slots = vec![(0u32, Vec::new())];
    let mut slot_moduli = vec![scalar_modulus];
    for i in 1..k {
        for t in generator_tuples(gamma.rank(), i) {
            slot_moduli.push(tuple_torsion(&gamma, &t).max(1));
            slots.push((i, t));
        }
    }
    let mut state_count: u64 = 1;
    for &m in &slot_moduli {
        state_count = state_count
            .checked_mul(m)
            .ok_or_else(|| Error::Precondition("universal state space overflows u64".into()))?;
    }
    Ok(UniversalSystem {
        gamma,
        k,
        b: b.clone(),
        slots,
        slot_moduli,
        state_count,
        scalar_modulus,
    })
}

/// Report of [`verify_action`] / [`verify_spectrum`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemReport {
    pub states_checked: u64,
    pub checks: u64,
    pub exhaustive: bool,
}

fn states_to_check(sys: &UniversalSystem) -> (Vec<u64>, bool) {
    if sys.state_count() <= 1_000_000 {
        ((0..sys.state_count()).collect(), true)
    } else {
        let mut rng = SplitMix64::new(0x5eed);
        (
            (0..10_000).map(|_| rng.next_below(sys.state_count())).collect(),
            false,
        )
    }
}

/// Checks T^gamma T^gamma' = T^(gamma+gamma') pointwise over all pairs of
/// acting elements, exhaustively over states when the space is small and
/// sampled otherwise. A violation is a bug-class error with a witness.
pub fn verify_action(sys: &UniversalSystem) -> Result<SystemReport> {
    let (state_indices, exhaustive) = states_to_check(sys);
    let perms: Vec<Vec<u32>> = sys
        .gamma()
        .elements()
        .map(|g| sys.shift_permutation(&g))
        .collect();
    let mut pairs = 0u64;
    for (ia, a) in sys.gamma().elements().enumerate() {
        for (ib, b) in sys.gamma().elements().enumerate() {
            let isum = sys.gamma().index_of(&sys.gamma().add(&a, &b)?);
            pairs += 1;
            for &s in &state_indices {
                let one = perms[ib][perms[ia][s as usize] as usize];
                let two = perms[isum][s as usize];
                if one != two {
                    return Err(Error::Invariant(format!(
                        "action fails at gamma={a}, gamma'={b}, state {s}"
                    )));
                }
            }
        }
    }
    Ok(SystemReport {
        states_checked: state_indices.len() as u64,
        checks: pairs,
        exhaustive,
    })
}

/// Checks that the k-fold derivative of the scalar coordinate along every
/// generator k-tuple is the constant k! b(tuple), exactly. Constancy makes
/// all (k+1)-fold derivatives vanish, so the scalar coordinate is a
/// polynomial of degree <= k on the system.
pub fn verify_spectrum(sys: &UniversalSystem) -> Result<SystemReport> {
    let k = sys.k();
    let (state_indices, exhaustive) = states_to_check(sys);
    let gen_perms: Vec<Vec<u32>> = (0..sys.gamma().rank())
        .map(|i| sys.shift_permutation(&sys.gamma().generator(i)))
        .collect();
    // Work in residues mod N: the scalar slot is exactly r/N, so the
    //sweep below is the same exact computation without allocations.
    let modulus = sys.scalar_modulus();
    let scalars: Vec<u64> = (0..sys.state_count())
        .map(|s| sys.state_at(s)[0])
        .collect();
    let k_factorial: u64 = (1..=k as u64).product();
    let mut tuples_checked = 0u64;
    for tuple in generator_tuples(sys.gamma().rank(), k) {
        let mut table = scalars.clone();
        for &i in &tuple {
            let perm = &gen_perms[i];
            table = (0..table.len())
                .map(|s| (table[perm[s] as usize] + modulus - table[s]) % modulus)
                .collect();
        }
        // Compare against the exact value of k! b, whatever it is; at
        // 2-torsion k=2 this is 0 mod 1 and the check still bites.
        let expect_exact = sys.form().on_generators(&tuple).scale(k_factorial as i64);
        let expect = expect_exact.numerator().to_u64().unwrap()
            * (modulus / expect_exact.denominator_u64().unwrap());
        tuples_checked += 1;
        for &s in &state_indices {
            if table[s as usize] != expect {
                return Err(Error::Invariant(format!(
                    "k-fold derivative along {tuple:?} at state {s} is {}/{modulus} but k! b = {expect_exact}",
                    table[s as usize]
                )));
            }
        }
    }
    Ok(SystemReport {
        states_checked: state_indices.len() as u64,
        checks: tuples_checked,
        exhaustive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> GroupSpec {
        GroupSpec::parse(s).unwrap()
    }

    fn frac(n: i64, d: i64) -> UnitRational {
        UnitRational::new(n, d)
    }

    #[test]
    fn eval_form_basics() {
        let g = spec("2,2");
        let b = SymForm::new(g.clone(), 2, vec![(vec![0, 1], frac(1, 2))]).unwrap();
        // Any zero argument gives zero.
        let e1 = g.generator(0);
        assert!(b.eval(&[g.zero(), e1.clone()]).unwrap().is_zero());
        // b(e1+e2, e1) = b(e1,e1) + b(e2,e1) = 1/2.
        let e12 = g.element(&[1, 1]).unwrap();
        assert_eq!(b.eval(&[e12, e1.clone()]).unwrap(), frac(1, 2));
        // Symmetry.
        let e2 = g.generator(1);
        assert_eq!(
            b.eval(&[e1.clone(), e2.clone()]).unwrap(),
            b.eval(&[e2, e1]).unwrap()
        );
    }

    #[test]
    fn torsion_is_enforced() {
        let g = spec("2,4");
        assert!(SymForm::new(g.clone(), 1, vec![(vec![0], frac(1, 4))]).is_err());
        assert!(SymForm::new(g, 1, vec![(vec![1], frac(1, 4))]).is_ok());
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for (s, m) in [("2,2", 1u32), ("2,2", 2), ("4", 2), ("2,4", 2), ("3", 2)] {
            let g = spec(s);
            let forms = enumerate_forms(&g, m, 1 << 30).unwrap();
            assert_eq!(
                forms.len() as u64,
                brute_force_sml_count(&g, m),
                "group {s}, order {m}"
            );
        }
    }

    /// Counts symmetric multilinear value tables the definitional way:
    /// assign arbitrary residues mod exp(G) to the generator tuples,
    /// extend by the coordinate expansion, and keep the assignments whose
    /// extension is additive in the first slot at every argument tuple.
    fn brute_force_sml_count(g: &GroupSpec, m: u32) -> u64 {
        let exp = g.exponent();
        let points: Vec<GroupElement> = g.elements().collect();
        let gen_tuples = generator_tuples(g.rank(), m);
        let eval = |candidate: &BTreeMap<Vec<usize>, UnitRational>,
                    args: &[&GroupElement]|
         -> UnitRational {
            let mut acc = UnitRational::zero();
            let mut idx = vec![0usize; m as usize];
            loop {
                let mut coeff: i128 = 1;
                for (j, &i) in idx.iter().enumerate() {
                    coeff *= args[j].coords()[i] as i128;
                }
                if coeff != 0 {
                    let mut key = idx.clone();
                    key.sort_unstable();
                    if let Some(v) = candidate.get(&key) {
                        acc = &acc + &v.scale(BigInt::from(coeff));
                    }
                }
                let mut j = 0;
                loop {
                    if j == idx.len() {
                        return acc;
                    }
                    idx[j] += 1;
                    if idx[j] < g.rank() {
                        break;
                    }
                    idx[j] = 0;
                    j += 1;
                }
            }
        };
        let mut count = 0u64;
        let mut digits = vec![0u64; gen_tuples.len()];
        'outer: loop {
            let candidate: BTreeMap<Vec<usize>, UnitRational> = gen_tuples
                .iter()
                .zip(&digits)
                .map(|(t, &d)| (t.clone(), frac(d as i64, exp as i64)))
                .collect();
            let mut ok = true;
            'check: for tuple_idx in 0..points.len().pow(m) {
                let mut rest = tuple_idx;
                let args: Vec<&GroupElement> = (0..m)
                    .map(|_| {
                        let p = &points[rest % points.len()];
                        rest /= points.len();
                        p
                    })
                    .collect();
                for extra in &points {
                    let sum = g.add(args[0], extra).unwrap();
                    let mut shifted = args.clone();
                    shifted[0] = &sum;
                    let mut replaced = args.clone();
                    replaced[0] = extra;
                    if eval(&candidate, &shifted)
                        != &eval(&candidate, &args) + &eval(&candidate, &replaced)
                    {
                        ok = false;
                        break 'check;
                    }
                }
            }
            if ok {
                count += 1;
            }
            let mut j = 0;
            loop {
                if j == digits.len() {
                    break 'outer;
                }
                digits[j] += 1;
                if digits[j] < exp {
                    break;
                }
                digits[j] = 0;
                j += 1;
            }
        }
        count
    }

    #[test]
    fn nabla_k_examples() {
        let g = spec("2,2");
        // Degree < k maps to the zero form.
        let constant = ExactTable::constant(&g, frac(1, 2));
        assert!(nabla_k(&constant, 1).unwrap().unwrap().is_zero());

        // A character maps to its own homomorphism at k = 1.
        let xi = crate::group::Character(g.element(&[1, 0]).unwrap());
        let ch = ExactTable::from_fn(&g, |x| g.character_pairing(&xi, x).unwrap());
        let r = nabla_k(&ch, 1).unwrap().unwrap();
        assert_eq!(r.on_generators(&[0]), frac(1, 2));
        assert!(r.on_generators(&[1]).is_zero());

        // P = binom(|x1|,1) binom(|x2|,1)/2: off-diagonal 1/2, diagonals 0.
        let p = ExactTable::from_fn(&g, |x| frac((x.coords()[0] * x.coords()[1]) as i64, 2));
        let r = nabla_k(&p, 2).unwrap().unwrap();
        assert_eq!(r.on_generators(&[0, 1]), frac(1, 2));
        assert!(r.on_generators(&[0, 0]).is_zero());
        assert!(r.on_generators(&[1, 1]).is_zero());

        // Degree > k yields a structured non-constancy witness.
        match nabla_k(&p, 1).unwrap() {
            Err(failure) => assert_eq!(failure.tuple.len(), 1),
            Ok(_) => panic!("expected a non-constancy witness"),
        }
    }

    #[test]
    fn nabla_k_additive() {
        let g = spec("2,4");
        let mut rng = SplitMix64::new(3);
        for _ in 0..8 {
            // Random affine-quadratic phases, guaranteed degree <= 2.
            let (a1, a2, c12) = (rng.next_below(2), rng.next_below(4), rng.next_below(2));
            let (b1, b2, d12) = (rng.next_below(2), rng.next_below(4), rng.next_below(2));
            let f1 = ExactTable::from_fn(&g, |x| {
                &(&frac((a1 * x.coords()[0]) as i64, 2)
                    + &frac((a2 * x.coords()[1]) as i64, 4))
                    + &frac((c12 * x.coords()[0] * x.coords()[1]) as i64, 2)
            });
            let f2 = ExactTable::from_fn(&g, |x| {
                &(&frac((b1 * x.coords()[0]) as i64, 2)
                    + &frac((b2 * x.coords()[1]) as i64, 4))
                    + &frac((d12 * x.coords()[0] * x.coords()[1]) as i64, 2)
            });
            let sum = ExactTable::from_values(
                g.clone(),
                f1.values()
                    .iter()
                    .zip(f2.values())
                    .map(|(a, b)| a + b)
                    .collect(),
            )
            .unwrap();
            let k = 2;
            let a = nabla_k(&f1, k).unwrap().unwrap();
            let b = nabla_k(&f2, k).unwrap().unwrap();
            let s = nabla_k(&sum, k).unwrap().unwrap();
            for t in generator_tuples(g.rank(), k) {
                assert_eq!(
                    s.on_generators(&t),
                    &a.on_generators(&t) + &b.on_generators(&t)
                );
            }
        }
    }

    fn assert_kernel_property(f: &ExactTable) {
        let deg = f.degree();
        for k in 1..=3u32 {
            match nabla_k(f, k).unwrap() {
                Ok(form) => match deg {
                    crate::polycalc::DegreeResult::Polynomial { degree, is_zero } => {
                        assert!(is_zero || degree <= k);
                        assert_eq!(form.is_zero(), is_zero || degree < k);
                    }
                    _ => panic!("degree <= k but no finite degree measured"),
                },
                Err(_) => match deg {
                    crate::polycalc::DegreeResult::Polynomial { degree, .. } => {
                        assert!(degree > k)
                    }
                    crate::polycalc::DegreeResult::NoFiniteDegree { .. } => {}
                },
            }
        }
    }

    #[test]
    fn nabla_kernel_is_lower_degree_exhaustive() {
        // nabla_k P = 0 iff degree(P) <= k-1: all tables with values in
        // (1/q)Z/Z, exhaustively where feasible.
        for (s, q) in [("2,2", 4u64), ("3", 6)] {
            let g = spec(s);
            let n = g.order() as usize;
            let mut digits = vec![0u64; n];
            'outer: loop {
                let f = ExactTable::from_values(
                    g.clone(),
                    digits.iter().map(|&d| frac(d as i64, q as i64)).collect(),
                )
                .unwrap();
                assert_kernel_property(&f);
                let mut j = 0;
                loop {
                    if j == n {
                        break 'outer;
                    }
                    digits[j] += 1;
                    if digits[j] < q {
                        break;
                    }
                    digits[j] = 0;
                    j += 1;
                }
            }
        }
    }

    #[test]
    fn nabla_kernel_is_lower_degree_sampled() {
        // The 2,4 state space is too large to exhaust; sample it.
        let g = spec("2,4");
        let q = 8u64;
        let n = g.order() as usize;
        let mut rng = SplitMix64::new(8);
        for _ in 0..40 {
            let f = ExactTable::from_values(
                g.clone(),
                (0..n)
                    .map(|_| frac(rng.next_below(q) as i64, q as i64))
                    .collect(),
            )
            .unwrap();
            assert_kernel_property(&f);
        }
    }

    #[test]
    fn universal_rotation_at_k1() {
        // k=1, Gamma=Z/2, b(e1)=1/2: the shift is rotation by 1/2.
        let g = spec("2");
        let b = SymForm::new(g.clone(), 1, vec![(vec![0], frac(1, 2))]).unwrap();
        let sys = build_universal_system(&b).unwrap();
        assert_eq!(sys.state_count(), 2);
        assert_eq!(sys.scalar_modulus(), 2);
        let shifted = sys.shift(&sys.state_at(0), &g.generator(0));
        assert_eq!(sys.scalar(&shifted), frac(1, 2));
        verify_action(&sys).unwrap();
        verify_spectrum(&sys).unwrap();
    }

    #[test]
    fn shift_matrix_matches_exact_shift() {
        // The integer matrix route must agree with the rational reference
        // on every state and every gamma.
        for (s, k) in [("2,2", 2u32), ("2,2", 3), ("3", 3), ("2,4", 2)] {
            let g = spec(s);
            let forms = enumerate_forms(&g, k, 1 << 14).unwrap();
            let mut rng = SplitMix64::new(23);
            for _ in 0..6 {
                let b = &forms[rng.next_below(forms.len() as u64) as usize];
                let sys = build_universal_system(b).unwrap();
                for gamma in g.elements() {
                    let matrix = sys.shift_matrix(&gamma);
                    for _ in 0..16 {
                        let state = sys.state_at(rng.next_below(sys.state_count()));
                        assert_eq!(matrix.apply(&state), sys.shift(&state, &gamma));
                    }
                }
            }
        }
    }

    #[test]
    fn universal_zero_form_fixes_zero_state() {
        let g = spec("2,2");
        let b = SymForm::zero(g.clone(), 2);
        let sys = build_universal_system(&b).unwrap();
        let zero_state = sys.state_at(0).iter().map(|_| 0u64).collect::<Vec<_>>();
        for gamma in g.elements() {
            assert_eq!(sys.shift(&zero_state, &gamma), zero_state);
        }
        verify_action(&sys).unwrap();
        verify_spectrum(&sys).unwrap();
    }

    #[test]
    fn universal_action_spectrum_and_orbit_order_k2() {
        let g = spec("2,2");
        for b in enumerate_forms(&g, 2, 1 << 20).unwrap() {
            let sys = build_universal_system(&b).unwrap();
            verify_action(&sys).unwrap();
            verify_spectrum(&sys).unwrap();
        }
        // T^gamma iterated ord(gamma) times is the identity.
        let b = SymForm::new(g.clone(), 2, vec![(vec![0, 1], frac(1, 2))]).unwrap();
        let sys = build_universal_system(&b).unwrap();
        for gamma in g.elements() {
            let perm = sys.shift_permutation(&gamma);
            let mut acc: Vec<u32> = (0..sys.state_count() as u32).collect();
            for _ in 0..order_of(&g, &gamma) {
                acc = acc.iter().map(|&v| perm[v as usize]).collect();
            }
            assert!(acc.iter().enumerate().all(|(i, &v)| v as usize == i));
        }
    }

    fn order_of(g: &GroupSpec, x: &GroupElement) -> u64 {
        let mut acc = x.clone();
        let mut n = 1;
        while acc != g.zero() {
            acc = g.add(&acc, x).unwrap();
            n += 1;
        }
        n
    }

    #[test]
    fn k3_displayed_expansion() {
        // Scalar row at k=3: b0 + 3 b1(g) + 3 b2(g,g) + b3(g,g,g), checked
        // against the residue engine through exact rationals.
        let g = spec("2,2");
        let b = SymForm::new(
            g.clone(),
            3,
            vec![(vec![0, 0, 1], frac(1, 2)), (vec![0, 1, 1], frac(1, 2))],
        )
        .unwrap();
        let sys = build_universal_system(&b).unwrap();
        let mut rng = SplitMix64::new(17);
        for _ in 0..50 {
            let state = sys.state_at(rng.next_below(sys.state_count()));
            for gamma in g.elements() {
                let shifted = sys.shift(&state, &gamma);
                let b0 = sys.scalar(&state);
                let b1 = sys.component(&state, 1);
                let b2 = sys.component(&state, 2);
                let expect = &(&(&b0 + &b1.eval(std::slice::from_ref(&gamma)).unwrap().scale(3))
                    + &b2.eval(&[gamma.clone(), gamma.clone()]).unwrap().scale(3))
                    + &b.eval(&[gamma.clone(), gamma.clone(), gamma.clone()]).unwrap();
                assert_eq!(sys.scalar(&shifted), expect);
            }
        }
    }

    #[test]
    fn form_division() {
        let g = spec("4");
        let b = SymForm::new(g.clone(), 1, vec![(vec![0], frac(1, 2))]).unwrap();
        let half = b.divide(2).unwrap();
        assert_eq!(half.on_generators(&[0]).scale(2), frac(1, 2));
        // 1/2 is not 2-divisible inside (1/2)Z/Z on a 2-torsion group.
        let z2 = spec("2");
        let c = SymForm::new(z2, 1, vec![(vec![0], frac(1, 2))]).unwrap();
        assert!(c.divide(2).is_none());
    }
}
