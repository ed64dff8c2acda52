//! Sparse multivariate polynomials over a prime field `F_p`, with an
//! integer-coefficient mode (`p = 0`) used only by cross-check oracles.
//!
//! Polynomials are kept in canonical form: no stored coefficient is
//! zero, and for `p > 0` coefficients live in `0..p`. Equality is term
//! map equality. The module also provides small matrices of polynomials
//! and their exact determinants by cofactor expansion; matrices in the
//! certificate checks never exceed 6 x 6 and their entries are close to
//! monomials after stratum restriction, so nothing fancier is needed.

use crate::wps::{Monomial, Stratum, WeightSystem};
use std::collections::BTreeMap;
use std::fmt;

/// Characteristic of the coefficient ring: a prime, or 0 for integers.
pub type Char = u32;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("mixed characteristics {0} and {1}")]
    CharMismatch(Char, Char),
    #[error("mixed arities {0} and {1}")]
    ArityMismatch(usize, usize),
    #[error("variable index {0} out of range for arity {1}")]
    IndexOutOfRange(usize, usize),
    #[error("matrix is not square ({rows} x {cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix dimension {0} exceeds the supported bound 6")]
    TooLarge(usize),
    #[error("matrix rows have unequal lengths")]
    Ragged,
}

/// A sparse polynomial in `arity` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    charac: Char,
    arity: usize,
    terms: BTreeMap<Vec<u32>, i64>,
}

fn reduce(c: i64, p: Char) -> i64 {
    if p == 0 {
        c
    } else {
        c.rem_euclid(p as i64)
    }
}

impl SparsePoly {
    pub fn zero(charac: Char, arity: usize) -> Self {
        SparsePoly { charac, arity, terms: BTreeMap::new() }
    }

    pub fn constant(charac: Char, arity: usize, c: i64) -> Self {
        let mut f = Self::zero(charac, arity);
        f.add_term(vec![0; arity], c);
        f
    }

    /// The monomial `coeff * x^e`.
    pub fn monomial(charac: Char, e: Vec<u32>, coeff: i64) -> Self {
        let arity = e.len();
        let mut f = Self::zero(charac, arity);
        f.add_term(e, coeff);
        f
    }

    pub fn from_exponents(charac: Char, m: &Monomial) -> Self {
        Self::monomial(charac, m.0.clone(), 1)
    }

    pub fn characteristic(&self) -> Char {
        self.charac
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &i64)> {
        self.terms.iter()
    }

    fn add_term(&mut self, e: Vec<u32>, c: i64) {
        debug_assert_eq!(e.len(), self.arity);
        let c = reduce(c, self.charac);
        if c == 0 {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = reduce(*v + c, self.charac);
                if *v == 0 {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    fn check_compat(&self, other: &Self) -> Result<(), PolyError> {
        if self.charac != other.charac {
            return Err(PolyError::CharMismatch(self.charac, other.charac));
        }
        if self.arity != other.arity {
            return Err(PolyError::ArityMismatch(self.arity, other.arity));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.charac, self.arity);
        for (e, &c) in &self.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compat(other)?;
        let mut out = Self::zero(self.charac, self.arity);
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, reduce(c1 * c2, self.charac));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self, PolyError> {
        let mut out = Self::constant(self.charac, self.arity, 1);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut out = Self::zero(self.charac, self.arity);
        for (e, &v) in &self.terms {
            out.add_term(e.clone(), reduce(v * reduce(c, self.charac), self.charac));
        }
        out
    }

    /// Formal partial derivative with respect to variable `i`; the term
    /// `c x^e` contributes `(c * e_i mod p) x^(e - unit_i)` and is
    /// dropped when `p | e_i`.
    pub fn partial_derivative(&self, i: usize) -> Result<Self, PolyError> {
        if i >= self.arity {
            return Err(PolyError::IndexOutOfRange(i, self.arity));
        }
        let mut out = Self::zero(self.charac, self.arity);
        for (e, &c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, reduce(c * reduce(e[i] as i64, self.charac), self.charac));
        }
        Ok(out)
    }

    /// Sets every coordinate outside the stratum to zero, i.e. drops
    /// every term whose support is not contained in the stratum.
    pub fn restrict_to_stratum(&self, s: &Stratum) -> Self {
        let mut out = Self::zero(self.charac, self.arity);
        for (e, &c) in &self.terms {
            let supported = e
                .iter()
                .enumerate()
                .all(|(i, &exp)| exp == 0 || s.contains(i));
            if supported {
                out.add_term(e.clone(), c);
            }
        }
        out
    }

    /// The exponent vector when the polynomial is a single term with a
    /// nonzero coefficient; `None` otherwise (in particular for 0).
    pub fn as_nonzero_monomial(&self) -> Option<Monomial> {
        if self.terms.len() == 1 {
            let e = self.terms.keys().next().unwrap().clone();
            Some(Monomial(e))
        } else {
            None
        }
    }

    /// Weighted degree when the polynomial is weighted-homogeneous;
    /// `None` otherwise or for 0.
    pub fn homogeneous_degree(&self, ws: &WeightSystem) -> Option<u64> {
        let mut degs = self.terms.keys().map(|e| ws.degree(&Monomial(e.clone())));
        let d = degs.next()?;
        degs.all(|d2| d2 == d).then_some(d)
    }

    /// Rendering with variables named by `names` (falling back to
    /// `x0..` when the arity exceeds the name list).
    pub fn render(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, &c) in &self.terms {
            let mut factors = Vec::new();
            for (i, &exp) in e.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                let name = names.get(i).map(|s| s.to_string()).unwrap_or(format!("x{i}"));
                if exp == 1 {
                    factors.push(name);
                } else {
                    factors.push(format!("{name}^{exp}"));
                }
            }
            let mono = if factors.is_empty() { "1".to_string() } else { factors.join("*") };
            if c == 1 {
                parts.push(mono);
            } else if factors.is_empty() {
                parts.push(format!("{c}"));
            } else {
                parts.push(format!("{c}*{mono}"));
            }
        }
        parts.join(" + ")
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&["x", "y", "z", "t", "w"]))
    }
}

/// A rectangular grid of polynomials sharing one characteristic and
/// arity. Dimensions stay at most 6 x 6.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<SparsePoly>,
}

impl PolyMatrix {
    pub fn new(rows: Vec<Vec<SparsePoly>>) -> Result<Self, PolyError> {
        let nrow = rows.len();
        let ncol = rows.first().map(|r| r.len()).unwrap_or(0);
        if nrow > 6 {
            return Err(PolyError::TooLarge(nrow));
        }
        if ncol > 6 {
            return Err(PolyError::TooLarge(ncol));
        }
        let mut entries = Vec::with_capacity(nrow * ncol);
        for row in &rows {
            if row.len() != ncol {
                return Err(PolyError::Ragged);
            }
        }
        let mut reference: Option<(Char, usize)> = None;
        for row in rows {
            for p in row {
                if let Some((c, a)) = reference {
                    if p.characteristic() != c {
                        return Err(PolyError::CharMismatch(c, p.characteristic()));
                    }
                    if p.arity() != a {
                        return Err(PolyError::ArityMismatch(a, p.arity()));
                    }
                } else {
                    reference = Some((p.characteristic(), p.arity()));
                }
                entries.push(p);
            }
        }
        Ok(PolyMatrix { rows: nrow, cols: ncol, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &SparsePoly {
        &self.entries[i * self.cols + j]
    }

    pub fn map<F: Fn(&SparsePoly) -> SparsePoly>(&self, f: F) -> Self {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn restrict_to_stratum(&self, s: &Stratum) -> Self {
        self.map(|p| p.restrict_to_stratum(s))
    }

    /// Exact determinant by cofactor expansion along the first row.
    pub fn determinant(&self) -> Result<SparsePoly, PolyError> {
        if self.rows != self.cols {
            return Err(PolyError::NotSquare { rows: self.rows, cols: self.cols });
        }
        if self.rows == 0 {
            return Err(PolyError::NotSquare { rows: 0, cols: 0 });
        }
        let charac = self.entries[0].characteristic();
        let arity = self.entries[0].arity();
        let idx: Vec<usize> = (0..self.rows).collect();
        Ok(self.det_rec(&idx, &idx, charac, arity))
    }

    fn det_rec(&self, rows: &[usize], cols: &[usize], charac: Char, arity: usize) -> SparsePoly {
        if rows.len() == 1 {
            return self.at(rows[0], cols[0]).clone();
        }
        let mut acc = SparsePoly::zero(charac, arity);
        let r = rows[0];
        let sub_rows: Vec<usize> = rows[1..].to_vec();
        for (k, &c) in cols.iter().enumerate() {
            let e = self.at(r, c);
            if e.is_zero() {
                continue;
            }
            let sub_cols: Vec<usize> =
                cols.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &cc)| cc).collect();
            let minor = self.det_rec(&sub_rows, &sub_cols, charac, arity);
            let term = e.mul(&minor).expect("uniform matrix");
            acc = if k % 2 == 0 {
                acc.add(&term).expect("uniform matrix")
            } else {
                acc.sub(&term).expect("uniform matrix")
            };
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wps::WeightSystem;

    fn mono(p: Char, e: &[u32]) -> SparsePoly {
        SparsePoly::monomial(p, e.to_vec(), 1)
    }

    #[test]
    fn derivative_examples() {
        // characteristic 2: d(y^7)/dy = y^6
        let f = mono(2, &[0, 7, 0, 0]);
        assert_eq!(f.partial_derivative(1).unwrap(), mono(2, &[0, 6, 0, 0]));
        // characteristic 3: d(x^3)/dx = 0
        let f = mono(3, &[3, 0]);
        assert!(f.partial_derivative(0).unwrap().is_zero());
        // characteristic 2: d(x y z t)/dy = x z t
        let f = mono(2, &[1, 1, 1, 1]);
        assert_eq!(f.partial_derivative(1).unwrap(), mono(2, &[1, 0, 1, 1]));
        assert_eq!(
            f.partial_derivative(9),
            Err(PolyError::IndexOutOfRange(9, 4))
        );
    }

    #[test]
    fn restriction_examples() {
        let s = Stratum::new(vec![1, 3]).unwrap(); // {y, t}
        let f = mono(2, &[1, 5, 0, 1]); // t y^5 x
        assert!(f.restrict_to_stratum(&s).is_zero());

        let f = mono(2, &[0, 2, 0, 3]);
        assert_eq!(f.restrict_to_stratum(&s), f);

        let s = Stratum::new(vec![2]).unwrap(); // {z}
        let f = mono(2, &[0, 0, 7, 0]).add(&mono(2, &[0, 1, 3, 0])).unwrap();
        assert_eq!(f.restrict_to_stratum(&s), mono(2, &[0, 0, 7, 0]));
    }

    #[test]
    fn nonzero_monomial_detection() {
        let f = SparsePoly::monomial(2, vec![0, 6, 6, 0], 49);
        assert_eq!(f.as_nonzero_monomial(), Some(Monomial(vec![0, 6, 6, 0])));
        assert_eq!(SparsePoly::zero(2, 4).as_nonzero_monomial(), None);
        let f = mono(2, &[1, 0]).add(&mono(2, &[0, 1])).unwrap();
        assert_eq!(f.as_nonzero_monomial(), None);
        // 49 = 0 mod 7: the term vanishes entirely
        assert!(SparsePoly::monomial(7, vec![0, 6, 6, 0], 49).is_zero());
    }

    #[test]
    fn determinant_of_diagonal() {
        let z = SparsePoly::zero(2, 4);
        let m = PolyMatrix::new(vec![
            vec![mono(2, &[3, 0, 0, 0]), z.clone()],
            vec![z.clone(), mono(2, &[0, 2, 0, 0])],
        ])
        .unwrap();
        assert_eq!(m.determinant().unwrap(), mono(2, &[3, 2, 0, 0]));
    }

    #[test]
    fn determinant_rejects_non_square() {
        let m = PolyMatrix::new(vec![vec![SparsePoly::zero(2, 1), SparsePoly::zero(2, 1)]]).unwrap();
        assert!(matches!(m.determinant(), Err(PolyError::NotSquare { .. })));
        assert!(matches!(
            PolyMatrix::new(vec![vec![SparsePoly::zero(2, 1); 7]]),
            Err(PolyError::TooLarge(7))
        ));
    }

    #[test]
    fn euler_relation_on_a_sample() {
        // weighted Euler relation: sum a_i x_i df/dx_i = (d mod p) f
        let ws = WeightSystem::new(vec![1, 2, 2, 3]).unwrap();
        let p = 2;
        let f = mono(p, &[1, 5, 0, 1]).add(&mono(p, &[0, 0, 7, 0])).unwrap();
        let d = f.homogeneous_degree(&ws).unwrap();
        let mut acc = SparsePoly::zero(p, 4);
        for i in 0..4 {
            let mut unit = vec![0u32; 4];
            unit[i] = 1;
            let xi = SparsePoly::monomial(p, unit, ws.weight(i) as i64);
            acc = acc.add(&xi.mul(&f.partial_derivative(i).unwrap()).unwrap()).unwrap();
        }
        assert_eq!(acc, f.scale((d % p as u64) as i64));
    }
}
