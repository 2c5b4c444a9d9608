//! Formal integer-coefficient polynomials in the vorticity symbols
//! `Γ_1..Γ_n`.
//!
//! Terms are kept in a sorted map from exponent vector to coefficient;
//! zero-coefficient terms are never stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::matrix::Permutation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaPolynomial {
    n: usize,
    terms: BTreeMap<Vec<u8>, i64>,
}

impl GammaPolynomial {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: i64) -> Self {
        let mut p = Self::zero(n);
        if c != 0 {
            p.terms.insert(vec![0; n], c);
        }
        p
    }

    /// The variable `Γ_v` (1-based).
    pub fn variable(n: usize, v: u8) -> Self {
        assert!(v >= 1 && (v as usize) <= n, "variable index out of range");
        let mut exps = vec![0u8; n];
        exps[(v - 1) as usize] = 1;
        let mut p = Self::zero(n);
        p.terms.insert(exps, 1);
        p
    }

    /// `Γ_J = Σ_{j∈J} Γ_j` for a subset of 1-based vertices.
    pub fn gamma_sum(n: usize, subset: &[u8]) -> Self {
        subset
            .iter()
            .fold(Self::zero(n), |acc, &v| &acc + &Self::variable(n, v))
    }

    /// `L_J = Σ_{j<k, j,k∈J} Γ_j Γ_k` for a subset of 1-based vertices.
    pub fn l_sum(n: usize, subset: &[u8]) -> Self {
        let mut acc = Self::zero(n);
        for (t, &j) in subset.iter().enumerate() {
            for &k in &subset[t + 1..] {
                acc = &acc + &(&Self::variable(n, j) * &Self::variable(n, k));
            }
        }
        acc
    }

    /// The total vortex angular momentum `L = L_{1..n}`.
    pub fn total_momentum(n: usize) -> Self {
        let all: Vec<u8> = (1..=n as u8).collect();
        Self::l_sum(n, &all)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as `(coefficient, exponent vector)`, sorted by exponents.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &[u8])> {
        self.terms.iter().map(|(e, &c)| (c, e.as_slice()))
    }

    fn insert(&mut self, exps: Vec<u8>, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let new = *o.get() + coeff;
                if new == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = new;
                }
            }
        }
    }

    /// Substitutes `Γ_i -> Γ_{σ(i)}`.
    pub fn permute_vars(&self, sigma: &Permutation) -> Self {
        assert_eq!(sigma.n(), self.n, "permutation size mismatch");
        let mut out = Self::zero(self.n);
        for (exps, &c) in &self.terms {
            let mut moved = vec![0u8; self.n];
            for (v, &e) in exps.iter().enumerate() {
                moved[(sigma.apply(v as u8 + 1) - 1) as usize] = e;
            }
            out.insert(moved, c);
        }
        out
    }
}

impl Add for &GammaPolynomial {
    type Output = GammaPolynomial;

    fn add(self, rhs: &GammaPolynomial) -> GammaPolynomial {
        assert_eq!(self.n, rhs.n, "arity mismatch");
        let mut out = self.clone();
        for (exps, &c) in &rhs.terms {
            out.insert(exps.clone(), c);
        }
        out
    }
}

impl Sub for &GammaPolynomial {
    type Output = GammaPolynomial;

    fn sub(self, rhs: &GammaPolynomial) -> GammaPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &GammaPolynomial {
    type Output = GammaPolynomial;

    fn neg(self) -> GammaPolynomial {
        let mut out = GammaPolynomial::zero(self.n);
        for (exps, &c) in &self.terms {
            out.terms.insert(exps.clone(), -c);
        }
        out
    }
}

impl Mul for &GammaPolynomial {
    type Output = GammaPolynomial;

    fn mul(self, rhs: &GammaPolynomial) -> GammaPolynomial {
        assert_eq!(self.n, rhs.n, "arity mismatch");
        let mut out = GammaPolynomial::zero(self.n);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &rhs.terms {
                let exps: Vec<u8> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert(exps, ca * cb);
            }
        }
        out
    }
}

impl Serialize for GammaPolynomial {
    /// Serializes as `[[coeff, [exponents...]], ...]` with exponent
    /// vectors over `Γ_1..Γ_n`, sorted by exponents.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (exps, &c) in &self.terms {
            seq.serialize_element(&(c, exps))?;
        }
        seq.end()
    }
}

impl fmt::Display for GammaPolynomial {
    /// Renders terms like `G1*G2 + 2*G3 - G4^2`, lead variables first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (t, (exps, &c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            if t == 0 {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else if c < 0 {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if mag != 1 || exps.iter().all(|&e| e == 0) {
                factors.push(mag.to_string());
            }
            for (v, &e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("G{}", v + 1)),
                    _ => factors.push(format!("G{}^{}", v + 1, e)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders() {
        assert!(GammaPolynomial::gamma_sum(5, &[]).is_zero());
        let l12 = GammaPolynomial::l_sum(5, &[1, 2]);
        let g1g2 = &GammaPolynomial::variable(5, 1) * &GammaPolynomial::variable(5, 2);
        assert_eq!(l12, g1g2);
        assert_eq!(
            GammaPolynomial::total_momentum(3),
            GammaPolynomial::l_sum(3, &[1, 2, 3])
        );
    }

    #[test]
    fn square_identity() {
        // (Γ_J)^2 = Σ_{j∈J} Γ_j^2 + 2 L_J
        for subset in [vec![1u8, 2, 3], vec![2, 4], vec![1, 2, 3, 4, 5]] {
            let n = 5;
            let gj = GammaPolynomial::gamma_sum(n, &subset);
            let squares = subset.iter().fold(GammaPolynomial::zero(n), |acc, &v| {
                let g = GammaPolynomial::variable(n, v);
                &acc + &(&g * &g)
            });
            let two_l = &GammaPolynomial::constant(n, 2) * &GammaPolynomial::l_sum(n, &subset);
            assert_eq!(&gj * &gj, &squares + &two_l);
        }
    }

    #[test]
    fn no_zero_terms_survive() {
        let g1 = GammaPolynomial::variable(4, 1);
        let diff = &g1 - &g1;
        assert!(diff.is_zero());
        assert_eq!(diff.terms().count(), 0);
    }

    #[test]
    fn ring_laws_on_samples() {
        let a = GammaPolynomial::gamma_sum(4, &[1, 2]);
        let b = GammaPolynomial::l_sum(4, &[2, 3, 4]);
        let c = GammaPolynomial::variable(4, 4);
        assert_eq!(&a + &b, &b + &a);
        assert_eq!(&a * &b, &b * &a);
        assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn permute_vars_substitutes() {
        let sigma = Permutation::from_images(&[2, 3, 1]).unwrap();
        let g1 = GammaPolynomial::variable(3, 1);
        assert_eq!(g1.permute_vars(&sigma), GammaPolynomial::variable(3, 2));
        let l = GammaPolynomial::total_momentum(3);
        assert_eq!(l.permute_vars(&sigma), l);
    }

    #[test]
    fn display_is_readable() {
        let p = &GammaPolynomial::l_sum(3, &[1, 2, 3]) - &GammaPolynomial::variable(3, 3);
        assert_eq!(p.to_string(), "G1*G2 + G1*G3 + G2*G3 - G3");
        assert_eq!(GammaPolynomial::zero(3).to_string(), "0");
    }
}
