//! Finite abelian groups presented as products of cyclic groups.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::UnitRational;

/// A finite abelian group `Z/d_1 x ... x Z/d_n`. The trivial group is the
/// empty product. Immutable after construction.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupSpec {
    moduli: Vec<u64>,
    /// Mixed-radix strides for the canonical enumeration order
    /// (first coordinate fastest).
    strides: Vec<u64>,
    order: u64,
}

impl GroupSpec {
    pub fn new(moduli: Vec<u64>) -> Result<Self> {
        if moduli.contains(&0) {
            return Err(Error::Precondition("modulus 0 is not allowed".into()));
        }
        let mut strides = Vec::with_capacity(moduli.len());
        let mut order: u64 = 1;
        for &d in &moduli {
            strides.push(order);
            order = order.checked_mul(d).ok_or_else(|| {
                Error::Precondition("group order overflows u64".into())
            })?;
        }
        Ok(GroupSpec {
            moduli,
            strides,
            order,
        })
    }

    /// Parses the spec string format: comma-separated moduli with the power
    /// shorthand `b^e` for repeated factors, e.g. `"2,2,4"` or `"2^5"`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut moduli = Vec::new();
        let s = s.trim();
        if !s.is_empty() {
            for item in s.split(',') {
                let item = item.trim();
                let (base, count) = match item.split_once('^') {
                    Some((b, e)) => {
                        let base: u64 = b.trim().parse().map_err(|_| bad_spec(item))?;
                        let count: u64 = e.trim().parse().map_err(|_| bad_spec(item))?;
                        (base, count)
                    }
                    None => (item.parse().map_err(|_| bad_spec(item))?, 1),
                };
                if base == 0 {
                    return Err(bad_spec(item));
                }
                moduli.extend(std::iter::repeat_n(base, count as usize));
            }
        }
        GroupSpec::new(moduli)
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// The exponent m = lcm(d_i); m*x = 0 for every element x.
    pub fn exponent(&self) -> u64 {
        self.moduli.iter().fold(1u64, |m, &d| m.lcm(&d))
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.moduli.len()],
        }
    }

    /// The i-th standard generator (0-based). Coordinate stays 0 when d_i = 1.
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut e = self.zero();
        if self.moduli[i] > 1 {
            e.coords[i] = 1;
        }
        e
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.coords.len() == self.moduli.len()
            && x.coords.iter().zip(&self.moduli).all(|(&c, &d)| c < d)
    }

    fn check(&self, x: &GroupElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "element {x} does not belong to group {self}"
            )))
        }
    }

    /// Element from arbitrary (possibly unreduced / negative) coordinates.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.moduli.len() {
            return Err(Error::Precondition(format!(
                "expected {} coordinates, got {}",
                self.moduli.len(),
                coords.len()
            )));
        }
        Ok(GroupElement {
            coords: coords
                .iter()
                .zip(&self.moduli)
                .map(|(&c, &d)| c.rem_euclid(d as i64) as u64)
                .collect(),
        })
    }

    /// Coordinatewise sum mod the moduli.
    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .zip(&self.moduli)
                .map(|((&x, &y), &d)| (x + y) % d)
                .collect(),
        })
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&self.moduli)
                .map(|(&x, &d)| (d - x) % d)
                .collect(),
        })
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    /// Integer multiple n*a.
    pub fn mul(&self, a: &GroupElement, n: i64) -> Result<GroupElement> {
        self.check(a)?;
        Ok(GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&self.moduli)
                .map(|(&x, &d)| {
                    let m = (x as i128 * n as i128).rem_euclid(d as i128);
                    m as u64
                })
                .collect(),
        })
    }

    /// Canonical enumeration index (first coordinate fastest).
    pub fn index_of(&self, x: &GroupElement) -> usize {
        debug_assert!(self.contains(x));
        x.coords
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| (c * s) as usize)
            .sum()
    }

    pub fn element_at(&self, mut idx: usize) -> GroupElement {
        debug_assert!((idx as u64) < self.order);
        let coords = self
            .moduli
            .iter()
            .map(|&d| {
                let c = (idx as u64) % d;
                idx /= d as usize;
                c
            })
            .collect();
        GroupElement { coords }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order as usize).map(move |i| self.element_at(i))
    }

    /// Index-level addition, the hot-path form of [`GroupSpec::add`].
    pub fn add_index(&self, a: usize, b: usize) -> usize {
        let mut out = 0usize;
        let (mut a, mut b) = (a as u64, b as u64);
        for (&d, &s) in self.moduli.iter().zip(&self.strides) {
            let (ca, cb) = (a % d, b % d);
            out += (((ca + cb) % d) * s) as usize;
            a /= d;
            b /= d;
        }
        out
    }

    /// Dense |G| x |G| index-addition table for kernel inner loops.
    /// Entry [a * |G| + b] = index of a + b.
    pub fn addition_table(&self) -> Vec<u32> {
        let n = self.order as usize;
        let mut out = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                out[a * n + b] = self.add_index(a, b) as u32;
            }
        }
        out
    }

    /// Direct sum G x H, moduli concatenated.
    pub fn product(&self, other: &GroupSpec) -> GroupSpec {
        let mut moduli = self.moduli.clone();
        moduli.extend_from_slice(&other.moduli);
        GroupSpec::new(moduli).expect("orders already fit")
    }

    /// The representative of x in the standard fundamental domain
    /// `{0..d_1-1} x ... x {0..d_n-1}`. Coordinates are stored reduced,
    /// so this is the identity on storage.
    pub fn residue_lift(&self, x: &GroupElement) -> Vec<u64> {
        debug_assert!(self.contains(x));
        x.coords.clone()
    }

    /// Bi-additive pairing `<xi, x> = sum xi_i x_i / d_i mod 1`.
    pub fn character_pairing(&self, xi: &Character, x: &GroupElement) -> Result<UnitRational> {
        self.check(&xi.0)?;
        self.check(x)?;
        let mut acc = UnitRational::zero();
        for ((&a, &b), &d) in xi.0.coords.iter().zip(&x.coords).zip(&self.moduli) {
            acc = &acc + &UnitRational::new(a as i64 * b as i64, d as i64);
        }
        Ok(acc)
    }

    /// All characters, indexed by the same spec (finite abelian self-duality).
    pub fn characters(&self) -> impl Iterator<Item = Character> + '_ {
        self.elements().map(Character)
    }

    /// Splits each Z/d_i by CRT into prime-power parts, grouping by prime.
    pub fn sylow_decompose(&self) -> SylowDecomposition {
        let mut parts: BTreeMap<u64, Vec<(usize, u64)>> = BTreeMap::new();
        for (i, &d) in self.moduli.iter().enumerate() {
            for (p, e) in factorize(d) {
                parts.entry(p).or_default().push((i, p.pow(e)));
            }
        }
        let parts = parts
            .into_iter()
            .map(|(p, comps)| {
                let spec = GroupSpec::new(comps.iter().map(|&(_, q)| q).collect()).unwrap();
                (
                    p,
                    SylowPart {
                        spec,
                        source_coords: comps.iter().map(|&(i, _)| i).collect(),
                    },
                )
            })
            .collect();
        SylowDecomposition {
            original: self.clone(),
            parts,
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.moduli.is_empty() {
            return write!(f, "trivial");
        }
        let strs: Vec<String> = self.moduli.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", strs.join(","))
    }
}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupSpec({self})")
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "trivial" {
            return Ok(GroupSpec::new(vec![]).unwrap());
        }
        GroupSpec::parse(&s).map_err(serde::de::Error::custom)
    }
}

fn bad_spec(item: &str) -> Error {
    Error::Parse(format!(
        "bad group spec item {item:?}: expected a positive integer or b^e"
    ))
}

/// A point of a [`GroupSpec`], coordinates always stored reduced.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", strs.join(","))
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A character of the group, self-dually indexed by an element of the same
/// spec: `xi` pairs with `x` as `sum xi_i x_i / d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Character(pub GroupElement);

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One prime-power block of a Sylow decomposition.
#[derive(Clone, Debug)]
pub struct SylowPart {
    pub spec: GroupSpec,
    /// For each coordinate of `spec`, the index of the original coordinate
    /// it was split from.
    pub source_coords: Vec<usize>,
}

/// CRT split of a group into its p-primary parts. `forward` projects onto
/// each part, `backward` reconstructs; the roundtrip is the identity and
/// `forward` is a group homomorphism.
#[derive(Clone, Debug)]
pub struct SylowDecomposition {
    original: GroupSpec,
    parts: BTreeMap<u64, SylowPart>,
}

impl SylowDecomposition {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.parts.keys().copied()
    }

    pub fn part(&self, p: u64) -> Option<&SylowPart> {
        self.parts.get(&p)
    }

    pub fn parts(&self) -> &BTreeMap<u64, SylowPart> {
        &self.parts
    }

    pub fn forward(&self, x: &GroupElement) -> Result<BTreeMap<u64, GroupElement>> {
        if !self.original.contains(x) {
            return Err(Error::Precondition(format!(
                "element {x} does not belong to group {}",
                self.original
            )));
        }
        Ok(self
            .parts
            .iter()
            .map(|(&p, part)| {
                let coords = part
                    .source_coords
                    .iter()
                    .zip(part.spec.moduli())
                    .map(|(&src, &q)| x.coords[src] % q)
                    .collect();
                (p, GroupElement { coords })
            })
            .collect())
    }

    pub fn backward(&self, pieces: &BTreeMap<u64, GroupElement>) -> Result<GroupElement> {
        for (&p, part) in &self.parts {
            let piece = pieces.get(&p).ok_or_else(|| {
                Error::Precondition(format!("missing {p}-primary component"))
            })?;
            if !part.spec.contains(piece) {
                return Err(Error::Precondition(format!(
                    "{p}-primary component {piece} does not belong to {}",
                    part.spec
                )));
            }
        }
        let mut coords = vec![0u64; self.original.rank()];
        for (i, &d) in self.original.moduli().iter().enumerate() {
            // CRT over the prime-power residues of coordinate i.
            let mut x: u128 = 0;
            for (&p, part) in &self.parts {
                for (j, &src) in part.source_coords.iter().enumerate() {
                    if src != i {
                        continue;
                    }
                    let q = part.spec.moduli()[j];
                    let r = pieces[&p].coords[j];
                    let m = (d / q) as u128;
                    let inv = mod_inverse(m % q as u128, q as u128)
                        .expect("d/q is invertible mod the prime power q");
                    x = (x + r as u128 * m % d as u128 * inv % d as u128) % d as u128;
                }
            }
            coords[i] = x as u64;
        }
        Ok(GroupElement { coords })
    }
}

/// Prime factorization of n (n >= 1), smallest primes first.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    let mut n = n;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn mod_inverse(a: u128, m: u128) -> Option<u128> {
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m as i128) as u128)
}
