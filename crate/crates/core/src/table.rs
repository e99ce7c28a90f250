//! Dense function tables over a finite abelian group, exact and complex.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Character, GroupElement, GroupSpec};
use crate::rational::UnitRational;

pub type Complex = Complex64;

/// e(t) = exp(2 pi i t).
pub fn e(t: f64) -> Complex {
    let a = 2.0 * std::f64::consts::PI * t;
    Complex::new(a.cos(), a.sin())
}

/// A dense map from a group to values, indexed in the canonical enumeration
/// order of the spec. An exact table never converts to floating form
/// implicitly; see [`FunctionTable::to_phase`].
#[derive(Clone, PartialEq, Debug)]
pub struct FunctionTable<V> {
    spec: GroupSpec,
    values: Vec<V>,
}

pub type ExactTable = FunctionTable<UnitRational>;
pub type ComplexTable = FunctionTable<Complex>;

impl<V: Clone> FunctionTable<V> {
    pub fn from_values(spec: GroupSpec, values: Vec<V>) -> Result<Self> {
        if values.len() as u64 != spec.order() {
            return Err(Error::Precondition(format!(
                "table needs {} values for group {spec}, got {}",
                spec.order(),
                values.len()
            )));
        }
        Ok(FunctionTable { spec, values })
    }

    pub fn from_fn(spec: &GroupSpec, mut f: impl FnMut(&GroupElement) -> V) -> Self {
        let values = spec.elements().map(|x| f(&x)).collect();
        FunctionTable {
            spec: spec.clone(),
            values,
        }
    }

    pub fn constant(spec: &GroupSpec, v: V) -> Self {
        FunctionTable {
            spec: spec.clone(),
            values: vec![v; spec.order() as usize],
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn value_at_index(&self, i: usize) -> &V {
        &self.values[i]
    }

    pub fn value(&self, x: &GroupElement) -> &V {
        &self.values[self.spec.index_of(x)]
    }

    /// f(. + a).
    pub fn translate(&self, a: &GroupElement) -> Result<Self> {
        if !self.spec.contains(a) {
            return Err(Error::Precondition(format!(
                "shift {a} does not belong to group {}",
                self.spec
            )));
        }
        let ai = self.spec.index_of(a);
        let values = (0..self.values.len())
            .map(|i| self.values[self.spec.add_index(i, ai)].clone())
            .collect();
        Ok(FunctionTable {
            spec: self.spec.clone(),
            values,
        })
    }

    pub fn same_spec(&self, other: &Self) -> Result<()> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "tables live on different groups: {} vs {}",
                self.spec, other.spec
            )))
        }
    }
}

impl ExactTable {
    pub fn zero(spec: &GroupSpec) -> Self {
        FunctionTable::constant(spec, UnitRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Explicit conversion to the complex phase table x -> e(f(x)).
    pub fn to_phase(&self) -> ComplexTable {
        FunctionTable {
            spec: self.spec.clone(),
            values: self.values.iter().map(|v| e(v.to_f64())).collect(),
        }
    }

    /// lcm of the value denominators (1 for the zero table).
    pub fn denominator_lcm(&self) -> Option<u64> {
        let mut l: u64 = 1;
        for v in &self.values {
            let d = v.denominator_u64()?;
            l = num_integer::lcm(l, d);
        }
        Some(l)
    }
}

impl ComplexTable {
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn mean(&self) -> Complex {
        if self.values.is_empty() {
            return Complex::new(0.0, 0.0);
        }
        let mut re = crate::parallel::Kahan::default();
        let mut im = crate::parallel::Kahan::default();
        for z in &self.values {
            re.add(z.re);
            im.add(z.im);
        }
        Complex::new(re.value(), im.value()) / self.values.len() as f64
    }

    /// Pointwise product with the conjugate of a character phase,
    /// f(x) e(-<xi, x>).
    pub fn demodulate(&self, xi: &Character) -> Result<ComplexTable> {
        let spec = self.spec.clone();
        let mut values = Vec::with_capacity(self.values.len());
        for (i, z) in self.values.iter().enumerate() {
            let x = spec.element_at(i);
            let t = spec.character_pairing(xi, &x)?;
            values.push(z * e(-t.to_f64()));
        }
        Ok(FunctionTable { spec, values })
    }

    /// Discrete Fourier transform over the dual group:
    /// fhat(xi) = E_x f(x) e(-<xi, x>), computed one axis at a time.
    /// Axes with modulus 2 use the Walsh–Hadamard butterfly.
    pub fn fourier_transform(&self) -> ComplexTable {
        let mut data = self.values.clone();
        let n = data.len();
        if n == 0 {
            return self.clone();
        }
        let moduli = self.spec.moduli().to_vec();
        let mut stride = 1usize;
        for &d in &moduli {
            let d = d as usize;
            if d > 1 {
                transform_axis(&mut data, stride, d);
            }
            stride *= d;
        }
        let scale = 1.0 / n as f64;
        for z in &mut data {
            *z *= scale;
        }
        FunctionTable {
            spec: self.spec.clone(),
            values: data,
        }
    }

    /// Inverse transform: f(x) = sum_xi fhat(xi) e(<xi, x>).
    pub fn inverse_fourier_transform(&self) -> ComplexTable {
        let conj = FunctionTable {
            spec: self.spec.clone(),
            values: self.values.iter().map(|z| z.conj()).collect(),
        };
        let t = conj.fourier_transform();
        let n = self.values.len() as f64;
        FunctionTable {
            spec: self.spec.clone(),
            values: t.values.iter().map(|z| z.conj() * n).collect(),
        }
    }
}

/// In-place length-d DFT (sign -1) along one mixed-radix axis.
fn transform_axis(data: &mut [Complex], stride: usize, d: usize) {
    let n = data.len();
    let block = stride * d;
    let mut scratch = vec![Complex::new(0.0, 0.0); d];
    if d == 2 {
        for base in (0..n).step_by(block) {
            for off in 0..stride {
                let i0 = base + off;
                let i1 = i0 + stride;
                let (a, b) = (data[i0], data[i1]);
                data[i0] = a + b;
                data[i1] = a - b;
            }
        }
        return;
    }
    // Twiddles w^(-jk) for w = e(1/d).
    let twiddle: Vec<Complex> = (0..d).map(|j| e(-(j as f64) / d as f64)).collect();
    for base in (0..n).step_by(block) {
        for off in 0..stride {
            for (k, s) in scratch.iter_mut().enumerate() {
                let mut acc = Complex::new(0.0, 0.0);
                for j in 0..d {
                    acc += data[base + off + j * stride] * twiddle[(j * k) % d];
                }
                *s = acc;
            }
            for (k, s) in scratch.iter().enumerate() {
                data[base + off + k * stride] = *s;
            }
        }
    }
}

/// Wire format for table JSON: exact values as `{num, den}` pairs,
/// complex values as `[re, im]` pairs.
#[derive(Serialize, Deserialize)]
pub struct TableJson {
    pub spec: GroupSpec,
    #[serde(flatten)]
    pub values: TableValues,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableValues {
    #[serde(rename = "values")]
    Exact(Vec<UnitRational>),
    #[serde(rename = "complex_values")]
    Complex(Vec<(f64, f64)>),
}

impl TableJson {
    pub fn from_exact(t: &ExactTable) -> Self {
        TableJson {
            spec: t.spec.clone(),
            values: TableValues::Exact(t.values.clone()),
        }
    }

    pub fn from_complex(t: &ComplexTable) -> Self {
        TableJson {
            spec: t.spec.clone(),
            values: TableValues::Complex(t.values.iter().map(|z| (z.re, z.im)).collect()),
        }
    }

    pub fn into_exact(self) -> Result<ExactTable> {
        match self.values {
            TableValues::Exact(values) => FunctionTable::from_values(self.spec, values),
            TableValues::Complex(_) => Err(Error::Precondition(
                "expected an exact table, found complex values".into(),
            )),
        }
    }

    pub fn into_complex(self) -> Result<ComplexTable> {
        match self.values {
            TableValues::Exact(values) => {
                Ok(FunctionTable::from_values(self.spec, values)?.to_phase())
            }
            TableValues::Complex(values) => FunctionTable::from_values(
                self.spec,
                values.into_iter().map(|(re, im)| Complex::new(re, im)).collect(),
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> GroupSpec {
        GroupSpec::parse(s).unwrap()
    }

    #[test]
    fn fourier_of_constant_is_delta() {
        let g = spec("2,3");
        let f = ComplexTable::constant(&g, Complex::new(1.0, 0.0));
        let fh = f.fourier_transform();
        assert!((fh.value_at_index(0) - Complex::new(1.0, 0.0)).norm() < 1e-12);
        for i in 1..g.order() as usize {
            assert!(fh.value_at_index(i).norm() < 1e-12);
        }
    }

    #[test]
    fn fourier_of_character_phase() {
        let g = spec("3,4");
        for xi in g.characters() {
            let f = ComplexTable::from_fn(&g, |x| {
                e(g.character_pairing(&xi, x).unwrap().to_f64())
            });
            let fh = f.fourier_transform();
            let xi_idx = g.index_of(&xi.0);
            for i in 0..g.order() as usize {
                let expect = if i == xi_idx { 1.0 } else { 0.0 };
                assert!(
                    (fh.value_at_index(i) - Complex::new(expect, 0.0)).norm() < 1e-10,
                    "character {xi} at index {i}"
                );
            }
        }
    }

    #[test]
    fn two_point_transform() {
        let g = spec("2");
        let f = ComplexTable::from_values(
            g.clone(),
            vec![Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)],
        )
        .unwrap();
        let fh = f.fourier_transform();
        assert!((fh.value_at_index(0).re - 0.5).abs() < 1e-12);
        assert!((fh.value_at_index(1).re - 0.5).abs() < 1e-12);
    }

    #[test]
    fn parseval_and_inversion() {
        let g = spec("2,3,4");
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            (z ^ (z >> 31)) as f64 / u64::MAX as f64
        };
        let f = ComplexTable::from_fn(&g, |_| Complex::new(next() * 2.0 - 1.0, next() * 2.0 - 1.0));
        let fh = f.fourier_transform();
        let lhs: f64 = fh.values().iter().map(|z| z.norm_sqr()).sum();
        let rhs: f64 =
            f.values().iter().map(|z| z.norm_sqr()).sum::<f64>() / g.order() as f64;
        assert!((lhs - rhs).abs() < 1e-10, "Parseval: {lhs} vs {rhs}");

        let back = fh.inverse_fourier_transform();
        for i in 0..g.order() as usize {
            assert!((back.value_at_index(i) - f.value_at_index(i)).norm() < 1e-10);
        }
    }

    #[test]
    fn trivial_group_transform() {
        let g = spec("");
        let f = ComplexTable::constant(&g, Complex::new(0.25, -0.5));
        let fh = f.fourier_transform();
        assert_eq!(fh.values().len(), 1);
        assert!((fh.value_at_index(0) - f.value_at_index(0)).norm() < 1e-15);
    }

    #[test]
    fn table_json_roundtrip() {
        let g = spec("2");
        let t = ExactTable::from_values(
            g.clone(),
            vec![UnitRational::zero(), UnitRational::new(1, 4)],
        )
        .unwrap();
        let j = serde_json::to_string(&TableJson::from_exact(&t)).unwrap();
        let back: TableJson = serde_json::from_str(&j).unwrap();
        assert_eq!(back.into_exact().unwrap(), t);

        let c = ComplexTable::from_values(
            g,
            vec![Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)],
        )
        .unwrap();
        let j = serde_json::to_string(&TableJson::from_complex(&c)).unwrap();
        let back: TableJson = serde_json::from_str(&j).unwrap();
        assert_eq!(back.into_complex().unwrap(), c);
    }
}
