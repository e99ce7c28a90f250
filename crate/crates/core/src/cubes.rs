//! Degree-k cube structures on products of finite abelian groups:
//! membership, counting, corner completion, the cube-difference operator,
//! and the coprime-torsion morphism constancy check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::rational::UnitRational;
use crate::table::ExactTable;

/// Which face dimension the degree-k cube condition quantifies over.
/// The displayed condition reads "k-faces", but only faces of dimension
/// k+1 make the structure k-step (unique completion of (k+1)-corners),
/// which is the property the structure is named for. `DegreePlusOne`
/// is therefore the default; `SameAsDegree` keeps the literal reading
/// available for experiments.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaceConvention {
    #[default]
    DegreePlusOne,
    SameAsDegree,
}

/// A product of degree-filtered abelian groups
/// D^{k_1}(U_1) x ... x D^{k_r}(U_r).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredAbelianSpec {
    components: Vec<(GroupSpec, u32)>,
}

impl FilteredAbelianSpec {
    pub fn new(components: Vec<(GroupSpec, u32)>) -> Result<Self> {
        if components.iter().any(|(_, k)| *k == 0) {
            return Err(Error::Precondition(
                "component degrees must be positive".into(),
            ));
        }
        Ok(FilteredAbelianSpec { components })
    }

    /// Parses the grammar `D<k>:<moduli>` joined by `;`,
    /// e.g. `"D1:2,2;D2:4"`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut components = Vec::new();
        for item in s.split(';') {
            let item = item.trim();
            let rest = item.strip_prefix('D').ok_or_else(|| {
                Error::Parse(format!("bad component {item:?}: expected D<k>:<moduli>"))
            })?;
            let (deg, moduli) = rest
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("bad component {item:?}: missing ':'")))?;
            let deg: u32 = deg
                .parse()
                .map_err(|_| Error::Parse(format!("bad degree in {item:?}")))?;
            components.push((GroupSpec::parse(moduli)?, deg));
        }
        FilteredAbelianSpec::new(components)
    }

    pub fn components(&self) -> &[(GroupSpec, u32)] {
        &self.components
    }

    /// The step k = max k_j.
    pub fn step(&self) -> u32 {
        self.components.iter().map(|&(_, k)| k).max().unwrap_or(0)
    }

    pub fn point_order(&self) -> u64 {
        self.components.iter().map(|(g, _)| g.order()).product()
    }
}

impl std::fmt::Display for FilteredAbelianSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|(g, k)| format!("D{k}:{g}"))
            .collect();
        write!(f, "{}", parts.join(";"))
    }
}

/// A point of the product: one element per component.
pub type Point = Vec<GroupElement>;

/// An n-dimensional tuple of points indexed by the vertices of {0,1}^n,
/// vertex omega stored at index sum omega_i 2^i.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeTuple {
    pub dimension: u32,
    pub entries: Vec<Point>,
}

impl CubeTuple {
    pub fn new(dimension: u32, entries: Vec<Point>) -> Result<Self> {
        if entries.len() != 1usize << dimension {
            return Err(Error::Precondition(format!(
                "dimension {dimension} needs {} vertices, got {}",
                1usize << dimension,
                entries.len()
            )));
        }
        Ok(CubeTuple { dimension, entries })
    }

    fn check_against(&self, spec: &FilteredAbelianSpec) -> Result<()> {
        for p in &self.entries {
            if p.len() != spec.components().len() {
                return Err(Error::Precondition(format!(
                    "point has {} components, spec has {}",
                    p.len(),
                    spec.components().len()
                )));
            }
            for (x, (g, _)) in p.iter().zip(spec.components()) {
                if !g.contains(x) {
                    return Err(Error::Precondition(format!(
                        "coordinate {x} does not belong to {g}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The faces of {0,1}^n of dimension d, as (free coordinate mask, base
/// vertex) pairs; the face is {base | sub : sub subset of mask}.
fn faces(n: u32, d: u32) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    if d > n {
        return out;
    }
    let full = (1usize << n) - 1;
    for mask in 0usize..=full {
        if mask.count_ones() != d {
            continue;
        }
        let fixed = full & !mask;
        let mut base = 0usize;
        loop {
            out.push((mask, base));
            if base == fixed {
                break;
            }
            base = base.wrapping_sub(fixed) & fixed;
        }
    }
    out
}

/// Decides membership in the product cube structure: per component of
/// degree k_j, the alternating sum over every face of dimension k_j + 1
/// (under the default convention) vanishes. For n <= k_j the condition
/// is vacuous.
pub fn cube_membership(
    spec: &FilteredAbelianSpec,
    c: &CubeTuple,
    convention: FaceConvention,
) -> Result<bool> {
    c.check_against(spec)?;
    let n = c.dimension;
    for (ci, (g, k)) in spec.components().iter().enumerate() {
        let face_dim = match convention {
            FaceConvention::DegreePlusOne => k + 1,
            FaceConvention::SameAsDegree => *k,
        };
        if face_dim > n {
            continue;
        }
        for &(mask, base) in &faces(n, face_dim) {
            let mut acc = g.zero();
            let mut sub = 0usize;
            loop {
                let x = &c.entries[base | sub][ci];
                let signed = if (sub.count_ones() & 1) == 1 {
                    g.neg(x)?
                } else {
                    x.clone()
                };
                acc = g.add(&acc, &signed)?;
                if sub == mask {
                    break;
                }
                sub = sub.wrapping_sub(mask) & mask;
            }
            if acc != g.zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Every point of the product, in the componentwise enumeration order.
pub fn all_points(spec: &FilteredAbelianSpec) -> Vec<Point> {
    let mut out: Vec<Point> = vec![Vec::new()];
    for (g, _) in spec.components() {
        let mut next = Vec::with_capacity(out.len() * g.order() as usize);
        for p in &out {
            for x in g.elements() {
                let mut q = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Report of [`count_cubes`].
#[derive(Clone, Debug, Serialize)]
pub struct CubeCountReport {
    pub n: u32,
    pub counted: u64,
    pub predicted: u64,
    pub tuples_scanned: u64,
}

/// Exhaustively counts the n-cubes and compares with the closed form
/// prod_j |U_j|^(sum_{i<=k_j} binom(n,i)). A mismatch is a bug-class
/// error: the count is forced by the filtration.
pub fn count_cubes(spec: &FilteredAbelianSpec, n: u32, budget: u64) -> Result<CubeCountReport> {
    let points = all_points(spec);
    let verts = 1u32 << n;
    let total = (points.len() as u128)
        .checked_pow(verts)
        .unwrap_or(u128::MAX);
    if total > budget as u128 {
        return Err(Error::Budget {
            what: format!("enumerating all {}^{verts} tuples", points.len()),
            needed: total,
            budget: budget as u128,
        });
    }
    let mut counted = 0u64;
    let mut idx = vec![0usize; verts as usize];
    loop {
        let entries: Vec<Point> = idx.iter().map(|&i| points[i].clone()).collect();
        let c = CubeTuple::new(n, entries)?;
        if cube_membership(spec, &c, FaceConvention::DegreePlusOne)? {
            counted += 1;
        }
        let mut j = 0;
        loop {
            if j == idx.len() {
                let predicted = predicted_cube_count(spec, n);
                if counted != predicted {
                    return Err(Error::Invariant(format!(
                        "counted {counted} cubes on {spec} but the closed form gives {predicted}"
                    )));
                }
                return Ok(CubeCountReport {
                    n,
                    counted,
                    predicted,
                    tuples_scanned: total as u64,
                });
            }
            idx[j] += 1;
            if idx[j] < points.len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// prod_j |U_j|^(sum_{i=0}^{min(k_j,n)} binom(n,i)).
pub fn predicted_cube_count(spec: &FilteredAbelianSpec, n: u32) -> u64 {
    spec.components()
        .iter()
        .map(|(g, k)| {
            let dims: u64 = (0..=(*k).min(n))
                .map(|i| binomial_u64(n as u64, i as u64))
                .sum();
            g.order().pow(dims as u32)
        })
        .product()
}

fn binomial_u64(n: u64, k: u64) -> u64 {
    use num_traits::ToPrimitive;
    crate::polycalc::binomial(n, k).to_u64().unwrap()
}

/// A corner: entries on all of {0,1}^n except the top vertex 1^n.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Corner {
    pub dimension: u32,
    /// Vertex omega at index sum omega_i 2^i, top vertex omitted.
    pub entries: Vec<Point>,
}

/// Completes a corner: every value of the top vertex making the full
/// tuple a cube. At n = step + 1 the completion is unique; below the
/// step several values may be admissible. The corner's facets (the n
/// faces avoiding the top vertex) must themselves be cubes.
pub fn corner_complete(
    spec: &FilteredAbelianSpec,
    corner: &Corner,
    convention: FaceConvention,
) -> Result<Vec<Point>> {
    let n = corner.dimension;
    let verts = 1usize << n;
    if corner.entries.len() != verts - 1 {
        return Err(Error::Precondition(format!(
            "corner of dimension {n} needs {} entries, got {}",
            verts - 1,
            corner.entries.len()
        )));
    }
    for j in 0..n {
        let bit = 1usize << j;
        let entries: Vec<Point> = (0..verts)
            .filter(|w| w & bit == 0)
            .map(|w| corner.entries[w].clone())
            .collect();
        let facet = CubeTuple::new(n - 1, entries)?;
        if !cube_membership(spec, &facet, convention)? {
            return Err(Error::Precondition(format!(
                "corner facet omega_{j} = 0 is not a cube"
            )));
        }
    }
    let mut completions = Vec::new();
    for candidate in all_points(spec) {
        let mut entries = corner.entries.clone();
        entries.push(candidate.clone());
        let c = CubeTuple::new(n, entries)?;
        if cube_membership(spec, &c, convention)? {
            completions.push(candidate);
        }
    }
    Ok(completions)
}

/// Host–Kra membership by upper-set elimination: the group for the
/// degree-k filtration on U is generated by tuples equal to some u on the
/// up-set of a vertex omega_0 with |omega_0| <= k and zero elsewhere.
/// Processing omega_0 by increasing weight forces each generator
/// coefficient; membership holds iff the residual dies. Agrees with
/// [`cube_membership`] on these product structures.
pub fn hk_membership(spec: &FilteredAbelianSpec, c: &CubeTuple) -> Result<bool> {
    c.check_against(spec)?;
    let n = c.dimension;
    let verts = 1usize << n;
    for (ci, (g, k)) in spec.components().iter().enumerate() {
        let mut residual: Vec<GroupElement> = c.entries.iter().map(|p| p[ci].clone()).collect();
        let mut order: Vec<usize> = (0..verts).collect();
        order.sort_by_key(|w| (w.count_ones(), *w));
        for w0 in order {
            if w0.count_ones() > *k {
                continue;
            }
            let coeff = residual[w0].clone();
            if coeff == g.zero() {
                continue;
            }
            for (w, r) in residual.iter_mut().enumerate() {
                if w & w0 == w0 {
                    *r = g.sub(r, &coeff)?;
                }
            }
        }
        if residual.iter().any(|r| *r != g.zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff the alternating sum of f over every k-dimensional
/// parallelepiped (x + omega . h) vanishes; equivalently every k-fold
/// derivative of f vanishes, i.e. f has degree <= k-1.
pub fn delta_k_vanishing(f: &ExactTable, k: u32, budget: u64) -> Result<bool> {
    let g = f.spec().clone();
    let n = g.order() as usize;
    let cost = (n as u128).pow(k + 1);
    if cost > budget as u128 {
        return Err(Error::Budget {
            what: format!("sweeping all {k}-cubes of {g}"),
            needed: cost,
            budget: budget as u128,
        });
    }
    if n == 0 {
        return Ok(true);
    }
    let verts = 1usize << k;
    let mut offsets = vec![0usize; verts];
    let mut hs = vec![0usize; k as usize];
    for t in 0..n.pow(k) {
        let mut rest = t;
        for h in hs.iter_mut() {
            *h = rest % n;
            rest /= n;
        }
        offsets[0] = 0;
        for w in 1..verts {
            let low = w.trailing_zeros() as usize;
            offsets[w] = g.add_index(offsets[w & (w - 1)], hs[low]);
        }
        for x in 0..n {
            let mut acc = UnitRational::zero();
            for (w, off) in offsets.iter().enumerate() {
                let v = f.value_at_index(g.add_index(x, *off));
                if (w.count_ones() & 1) == 1 {
                    acc = &acc - v;
                } else {
                    acc = &acc + v;
                }
            }
            if !acc.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Report of [`morphism_constancy`].
#[derive(Clone, Debug, Serialize)]
pub struct ConstancyReport {
    pub domain_order: u64,
    pub target_order: u64,
    pub functions_scanned: u64,
    pub polynomial_functions: u64,
    pub all_polynomials_constant: bool,
}

/// Exhaustively scans the functions Z/q^l -> Z/p^m (p != q prime) and
/// verifies only the constants are polynomial of any degree: coprime
/// torsion forces morphism constancy. Polynomiality is decided exactly by
/// iterating the generator derivative until it vanishes or revisits a
/// state.
pub fn morphism_constancy(q: u64, l: u32, p: u64, m: u32) -> Result<ConstancyReport> {
    for (name, v) in [("q", q), ("p", p)] {
        let f = crate::group::factorize(v);
        if f.len() != 1 || f[0].1 != 1 {
            return Err(Error::Precondition(format!("{name} = {v} is not prime")));
        }
    }
    if p == q {
        return Err(Error::Precondition(
            "the constancy statement needs distinct primes p != q".into(),
        ));
    }
    let ql = q.pow(l);
    let pm = p.pow(m);
    if ql.saturating_mul(pm) > 10_000 {
        return Err(Error::Precondition(format!(
            "need q^l * p^m <= 10^4, got {ql} * {pm}"
        )));
    }
    let function_count = (pm as u128).checked_pow(ql as u32).unwrap_or(u128::MAX);
    if function_count > 10_000_000 {
        return Err(Error::Budget {
            what: format!("scanning {pm}^{ql} functions"),
            needed: function_count,
            budget: 10_000_000,
        });
    }
    let dom = ql as usize;
    let mut polynomial_functions = 0u64;
    let mut all_polynomials_constant = true;
    let mut table = vec![0u64; dom];
    let mut scanned = 0u64;
    loop {
        scanned += 1;
        let constant = table.windows(2).all(|w| w[0] == w[1]);
        // Iterate f -> (x -> f(x+1) - f(x)) mod p^m; on a finite space it
        // either reaches zero (polynomial) or revisits a state (not).
        let mut seen = std::collections::HashSet::new();
        let mut cur = table.clone();
        let polynomial = loop {
            if cur.iter().all(|&v| v == 0) {
                break true;
            }
            if !seen.insert(cur.clone()) {
                break false;
            }
            cur = (0..dom)
                .map(|x| (cur[(x + 1) % dom] + pm - cur[x]) % pm)
                .collect();
        };
        if polynomial {
            polynomial_functions += 1;
            if !constant {
                all_polynomials_constant = false;
            }
        } else if constant {
            return Err(Error::Invariant(
                "a constant function failed the polynomial test".into(),
            ));
        }
        let mut j = 0;
        loop {
            if j == dom {
                return Ok(ConstancyReport {
                    domain_order: ql,
                    target_order: pm,
                    functions_scanned: scanned,
                    polynomial_functions,
                    all_polynomials_constant,
                });
            }
            table[j] += 1;
            if table[j] < pm {
                break;
            }
            table[j] = 0;
            j += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycalc::DegreeResult;

    fn fspec(s: &str) -> FilteredAbelianSpec {
        FilteredAbelianSpec::parse(s).unwrap()
    }

    fn constant_tuple(spec: &FilteredAbelianSpec, n: u32) -> CubeTuple {
        let p: Point = spec
            .components()
            .iter()
            .map(|(g, _)| g.element(&vec![1i64; g.rank()]).unwrap())
            .collect();
        CubeTuple::new(n, vec![p; 1 << n]).unwrap()
    }

    #[test]
    fn parse_grammar() {
        let s = fspec("D1:2,2;D2:4");
        assert_eq!(s.components().len(), 2);
        assert_eq!(s.components()[0].1, 1);
        assert_eq!(s.components()[1].0.moduli(), &[4]);
        assert_eq!(s.step(), 2);
        assert!(FilteredAbelianSpec::parse("E1:2").is_err());
        assert!(FilteredAbelianSpec::parse("D0:2").is_err());
    }

    #[test]
    fn constants_are_cubes() {
        for s in ["D1:2", "D2:3", "D1:2;D2:4"] {
            let spec = fspec(s);
            for n in 0..=3 {
                assert!(cube_membership(
                    &spec,
                    &constant_tuple(&spec, n),
                    FaceConvention::DegreePlusOne
                )
                .unwrap());
            }
        }
    }

    #[test]
    fn parallelogram_law_on_degree_one() {
        // D^1(Z/2), n=2: member iff a - b - c + d = 0; exactly 8 of 16.
        let report = count_cubes(&fspec("D1:2"), 2, 1 << 20).unwrap();
        assert_eq!(report.counted, 8);
        assert_eq!(report.predicted, 8);
    }

    #[test]
    fn vacuous_condition_below_the_step() {
        // D^2(Z/2), n=2: no dimension-3 face exists; all 16 tuples pass.
        let report = count_cubes(&fspec("D2:2"), 2, 1 << 20).unwrap();
        assert_eq!(report.counted, 16);
    }

    #[test]
    fn count_128_of_256() {
        let report = count_cubes(&fspec("D2:2"), 3, 1 << 20).unwrap();
        assert_eq!(report.counted, 128);
        assert_eq!(report.tuples_scanned, 256);
    }

    #[test]
    fn count_matches_closed_form_on_catalog() {
        for (s, n) in [
            ("D1:2", 1),
            ("D1:2", 2),
            ("D1:2", 3),
            ("D1:3", 2),
            ("D2:2", 2),
            ("D2:2", 3),
            ("D1:4", 2),
            ("D3:2", 3),
            ("D1:2;D2:2", 2),
            ("D1:2,2", 2),
            ("D2:3", 2),
            ("D1:6", 2),
        ] {
            let spec = fspec(s);
            let r = count_cubes(&spec, n, 1 << 24).unwrap();
            assert_eq!(r.counted, r.predicted, "{s} n={n}");
        }
    }

    #[test]
    fn literal_face_convention_is_not_k_step() {
        // Under the literal reading, D^1(Z/2) at n=1 already constrains
        // the edges, which is incompatible with the 1-step property.
        let spec = fspec("D1:2");
        let g = &spec.components()[0].0;
        let c = CubeTuple::new(
            1,
            vec![
                vec![g.element(&[0]).unwrap()],
                vec![g.element(&[1]).unwrap()],
            ],
        )
        .unwrap();
        assert!(cube_membership(&spec, &c, FaceConvention::DegreePlusOne).unwrap());
        assert!(!cube_membership(&spec, &c, FaceConvention::SameAsDegree).unwrap());
    }

    #[test]
    fn corner_completion_unique_at_step_plus_one() {
        // D^1(U), n=2: the corner (a,b,c) completes uniquely to b+c-a.
        let spec = fspec("D1:4");
        let g = &spec.components()[0].0;
        let corner = Corner {
            dimension: 2,
            entries: vec![
                vec![g.element(&[1]).unwrap()],
                vec![g.element(&[3]).unwrap()],
                vec![g.element(&[2]).unwrap()],
            ],
        };
        let completions = corner_complete(&spec, &corner, FaceConvention::DegreePlusOne).unwrap();
        assert_eq!(completions.len(), 1);
        assert_eq!(completions[0][0], g.element(&[3 + 2 - 1]).unwrap());

        // Below the step the top value is unconstrained: 2 completions.
        let spec2 = fspec("D2:2");
        let g2 = &spec2.components()[0].0;
        let corner2 = Corner {
            dimension: 2,
            entries: vec![
                vec![g2.element(&[0]).unwrap()],
                vec![g2.element(&[1]).unwrap()],
                vec![g2.element(&[1]).unwrap()],
            ],
        };
        let completions =
            corner_complete(&spec2, &corner2, FaceConvention::DegreePlusOne).unwrap();
        assert_eq!(completions.len(), 2);
    }

    #[test]
    fn every_valid_corner_completes_uniquely() {
        // Exhaustive k-step check at n = step + 1.
        for s in ["D1:2", "D1:3", "D2:2", "D1:2;D2:2"] {
            let spec = fspec(s);
            let n = spec.step() + 1;
            let verts = 1usize << n;
            let points = all_points(&spec);
            let mut idx = vec![0usize; verts - 1];
            'outer: loop {
                let corner = Corner {
                    dimension: n,
                    entries: idx.iter().map(|&i| points[i].clone()).collect(),
                };
                match corner_complete(&spec, &corner, FaceConvention::DegreePlusOne) {
                    Ok(completions) => assert_eq!(completions.len(), 1, "{s}"),
                    Err(Error::Precondition(_)) => {}
                    Err(e) => panic!("{e}"),
                }
                let mut j = 0;
                loop {
                    if j == idx.len() {
                        break 'outer;
                    }
                    idx[j] += 1;
                    if idx[j] < points.len() {
                        break;
                    }
                    idx[j] = 0;
                    j += 1;
                }
            }
        }
    }

    #[test]
    fn hk_agrees_with_cube_membership() {
        for (s, max_n) in [("D1:2", 3), ("D2:2", 3), ("D1:2;D2:2", 2), ("D1:3", 2)] {
            let spec = fspec(s);
            let points = all_points(&spec);
            for n in 1..=max_n {
                let verts = 1usize << n;
                if (points.len() as u128).pow(verts as u32) > 1 << 20 {
                    continue;
                }
                let mut idx = vec![0usize; verts];
                'outer: loop {
                    let c =
                        CubeTuple::new(n, idx.iter().map(|&i| points[i].clone()).collect())
                            .unwrap();
                    assert_eq!(
                        hk_membership(&spec, &c).unwrap(),
                        cube_membership(&spec, &c, FaceConvention::DegreePlusOne).unwrap(),
                        "{s} n={n} idx={idx:?}"
                    );
                    let mut j = 0;
                    loop {
                        if j == idx.len() {
                            break 'outer;
                        }
                        idx[j] += 1;
                        if idx[j] < points.len() {
                            break;
                        }
                        idx[j] = 0;
                        j += 1;
                    }
                }
            }
        }
    }

    #[test]
    fn generators_are_members_and_non_cubes_are_not() {
        let spec = fspec("D1:2");
        let g = &spec.components()[0].0;
        let one = g.element(&[1]).unwrap();
        let zero = g.zero();
        // The generator supported on the up-set of omega_0 = (1,0):
        // vertices 01 and 11 in index order 00,01,10,11.
        let gen = CubeTuple::new(
            2,
            vec![
                vec![zero.clone()],
                vec![one.clone()],
                vec![zero.clone()],
                vec![one.clone()],
            ],
        )
        .unwrap();
        assert!(hk_membership(&spec, &gen).unwrap());
        // a - b - c + d != 0 is rejected by both characterizations.
        let bad = CubeTuple::new(
            2,
            vec![
                vec![one.clone()],
                vec![zero.clone()],
                vec![zero.clone()],
                vec![zero],
            ],
        )
        .unwrap();
        assert!(!hk_membership(&spec, &bad).unwrap());
        assert!(!cube_membership(&spec, &bad, FaceConvention::DegreePlusOne).unwrap());
    }

    #[test]
    fn face_restriction_and_duplication_stay_cubes() {
        let spec = fspec("D2:2;D1:4");
        let points = all_points(&spec);
        let mut rng = crate::rng::SplitMix64::new(4);
        let n = 3u32;
        let mut found = 0;
        while found < 20 {
            let entries: Vec<Point> = (0..(1 << n))
                .map(|_| points[rng.next_below(points.len() as u64) as usize].clone())
                .collect();
            let c = CubeTuple::new(n, entries).unwrap();
            if !cube_membership(&spec, &c, FaceConvention::DegreePlusOne).unwrap() {
                continue;
            }
            found += 1;
            // Restriction to the face omega_0 = 0.
            let face: Vec<Point> = (0..(1usize << n))
                .filter(|w| w & 1 == 0)
                .map(|w| c.entries[w].clone())
                .collect();
            let f = CubeTuple::new(n - 1, face).unwrap();
            assert!(cube_membership(&spec, &f, FaceConvention::DegreePlusOne).unwrap());
            // Pre-composition with coordinate duplication.
            let dup: Vec<Point> = (0..(1usize << (n + 1)))
                .map(|w| c.entries[w & ((1 << n) - 1)].clone())
                .collect();
            let d = CubeTuple::new(n + 1, dup).unwrap();
            assert!(cube_membership(&spec, &d, FaceConvention::DegreePlusOne).unwrap());
        }
    }

    #[test]
    fn delta_k_matches_degree() {
        // f = binom(|x|,1)/4 valued in (1/4)Z/Z. On Z/2 it has degree 2:
        // Delta^2 does not vanish, Delta^3 does. On Z/4 the same formula
        // is the character x/4, degree 1, and Delta^2 already vanishes;
        // the equivalence with the measured degree holds in both cases.
        let z2 = GroupSpec::parse("2").unwrap();
        let f = ExactTable::from_fn(&z2, |x| UnitRational::new(x.coords()[0], 4));
        assert!(!delta_k_vanishing(&f, 2, 1 << 24).unwrap());
        assert!(delta_k_vanishing(&f, 3, 1 << 24).unwrap());
        assert_eq!(
            f.degree(),
            DegreeResult::Polynomial {
                degree: 2,
                is_zero: false
            }
        );

        let z4 = GroupSpec::parse("4").unwrap();
        let ch = ExactTable::from_fn(&z4, |x| UnitRational::new(x.coords()[0], 4));
        assert!(delta_k_vanishing(&ch, 2, 1 << 24).unwrap());
        assert!(!delta_k_vanishing(&ch, 1, 1 << 24).unwrap());
        assert_eq!(
            ch.degree(),
            DegreeResult::Polynomial {
                degree: 1,
                is_zero: false
            }
        );

        let constant = ExactTable::constant(&z4, UnitRational::new(1, 3));
        for k in 1..=3 {
            assert!(delta_k_vanishing(&constant, k, 1 << 24).unwrap());
        }

        // Characters vanish at k = 2 but not at k = 1.
        let g2 = GroupSpec::parse("2,3").unwrap();
        for xi in g2.characters().skip(1) {
            let ch = ExactTable::from_fn(&g2, |x| g2.character_pairing(&xi, x).unwrap());
            assert!(delta_k_vanishing(&ch, 2, 1 << 24).unwrap());
            assert!(!delta_k_vanishing(&ch, 1, 1 << 24).unwrap());
        }
    }

    #[test]
    fn delta_k_iff_degree_on_random_tables() {
        let mut rng = crate::rng::SplitMix64::new(12);
        for s in ["2,2", "4", "2,4"] {
            let g = GroupSpec::parse(s).unwrap();
            let q = g.exponent();
            for _ in 0..15 {
                let f = ExactTable::from_fn(&g, |_| UnitRational::new(rng.next_below(q), q));
                let deg = f.degree();
                for k in 1..=4u32 {
                    let vanishes = delta_k_vanishing(&f, k, 1 << 26).unwrap();
                    match &deg {
                        DegreeResult::Polynomial { degree, is_zero } => {
                            assert_eq!(vanishes, *is_zero || *degree < k, "{s} k={k}");
                        }
                        DegreeResult::NoFiniteDegree { .. } => assert!(!vanishes),
                    }
                }
            }
        }
    }

    #[test]
    fn constancy_examples() {
        let r = morphism_constancy(3, 1, 2, 1).unwrap();
        assert_eq!(r.functions_scanned, 8);
        assert_eq!(r.polynomial_functions, 2);
        assert!(r.all_polynomials_constant);

        let r = morphism_constancy(2, 1, 3, 1).unwrap();
        assert_eq!(r.polynomial_functions, 3);
        assert!(r.all_polynomials_constant);

        assert!(morphism_constancy(2, 1, 2, 1).is_err());
        assert!(morphism_constancy(4, 1, 3, 1).is_err());
    }
}
