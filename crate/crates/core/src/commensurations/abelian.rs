//! Partial automorphisms of Z^n as rational matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::freewords::IntVector;
use crate::lattices::Lattice;
use crate::matrix::RationalMatrix;

/// `x ↦ M x` from `domain` onto `codomain = M · domain`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbelianComm {
    domain: Lattice,
    codomain: Lattice,
    matrix: RationalMatrix,
}

fn scale_lattice(l: &Lattice, d: &BigInt) -> Result<Lattice> {
    let cols: Vec<IntVector> = l.columns().iter().map(|c| c.scale(d)).collect();
    Lattice::from_generators(l.dim(), &cols)
}

impl AbelianComm {
    /// Restricts `matrix` to `domain`; the images must be integral.
    pub fn new(domain: Lattice, matrix: RationalMatrix) -> Result<AbelianComm> {
        if domain.dim() != matrix.dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.dim(),
                found: matrix.dim(),
            });
        }
        if matrix.det().is_zero() {
            return Err(Error::Singular);
        }
        let mut images = Vec::with_capacity(domain.dim());
        for c in domain.columns() {
            images.push(matrix.apply_int(&c).ok_or_else(|| {
                Error::NotIsomorphism(format!("matrix sends {c} outside Z^{}", domain.dim()))
            })?);
        }
        let codomain = Lattice::from_generators(domain.dim(), &images)?;
        Ok(AbelianComm {
            domain,
            codomain,
            matrix,
        })
    }

    /// Canonical maximal domain `{x ∈ Z^n : M x ∈ Z^n}`.
    pub fn from_matrix(matrix: RationalMatrix) -> Result<AbelianComm> {
        let n = matrix.dim();
        if matrix.det().is_zero() {
            return Err(Error::Singular);
        }
        let (d, a) = matrix.scaled_integer();
        let domain = Lattice::scalar(n, &d).preimage(&a)?;
        AbelianComm::new(domain, matrix)
    }

    pub fn identity(n: usize) -> AbelianComm {
        AbelianComm::new(Lattice::whole(n), RationalMatrix::identity(n)).expect("identity")
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn domain(&self) -> &Lattice {
        &self.domain
    }

    pub fn codomain(&self) -> &Lattice {
        &self.codomain
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &IntVector) -> Result<IntVector> {
        if !self.domain.contains(v)? {
            return Err(Error::Precondition(format!("{v} is not in the domain {}", self.domain)));
        }
        Ok(self.matrix.apply_int(v).expect("domain maps into Z^n"))
    }

    /// `{ x ∈ domain : M x ∈ l }`.
    pub fn preimage(&self, l: &Lattice) -> Result<Lattice> {
        let (d, a) = self.matrix.scaled_integer();
        scale_lattice(l, &d)?.preimage(&a)?.intersect(&self.domain)
    }

    /// `M · l` for `l ≤ domain`.
    pub fn image(&self, l: &Lattice) -> Result<Lattice> {
        if !l.is_subgroup_of(&self.domain)? {
            return Err(Error::NotSubgroup(format!("{l} is not inside {}", self.domain)));
        }
        let images: Vec<IntVector> = l
            .columns()
            .iter()
            .map(|c| self.matrix.apply_int(c).expect("integral on domain"))
            .collect();
        Lattice::from_generators(self.dim(), &images)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AbelianComm) -> Result<AbelianComm> {
        let meet = other.codomain.intersect(&self.domain)?;
        let domain = other.preimage(&meet)?;
        AbelianComm::new(domain, &self.matrix * &other.matrix)
    }

    pub fn invert(&self) -> Result<AbelianComm> {
        AbelianComm::new(self.codomain.clone(), self.matrix.inverse()?)
    }

    pub fn restrict(&self, sub: &Lattice) -> Result<AbelianComm> {
        if !sub.is_subgroup_of(&self.domain)? {
            return Err(Error::NotSubgroup(format!(
                "{sub} is not a subgroup of the domain {}",
                self.domain
            )));
        }
        AbelianComm::new(sub.clone(), self.matrix.clone())
    }

    pub fn equivalent(&self, other: &AbelianComm) -> Result<bool> {
        let meet = self.domain.intersect(&other.domain)?;
        let to_q = |v: &IntVector| -> Vec<BigRational> {
            v.0.iter().map(|x| BigRational::from(x.clone())).collect()
        };
        Ok(meet
            .columns()
            .iter()
            .all(|c| self.matrix.apply(&to_q(c)) == other.matrix.apply(&to_q(c))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::rational;

    fn scalar(p: i64, q: i64) -> RationalMatrix {
        RationalMatrix::new(vec![vec![rational(p, q)]]).unwrap()
    }

    #[test]
    fn canonical_domain() {
        let half = AbelianComm::from_matrix(scalar(1, 2)).unwrap();
        assert_eq!(half.domain(), &Lattice::scalar(1, &BigInt::from(2)));
        assert_eq!(half.codomain(), &Lattice::whole(1));
        let m = RationalMatrix::parse_rows(&["1/2 0", "1/3 1"], 2, 1).unwrap();
        let c = AbelianComm::from_matrix(m).unwrap();
        // oracle: brute force over a box
        for x in -12i64..=12 {
            for y in -12i64..=12 {
                let v = IntVector::from_i64s(&[x, y]);
                let integral = x % 2 == 0 && x % 3 == 0;
                assert_eq!(c.domain().contains(&v).unwrap(), integral);
            }
        }
    }

    #[test]
    fn spec_examples() {
        let two = AbelianComm::from_matrix(scalar(2, 1)).unwrap();
        let three = AbelianComm::from_matrix(scalar(3, 1)).unwrap();
        assert_eq!(two.compose(&three).unwrap().matrix(), &scalar(6, 1));
        let inv = two.invert().unwrap();
        assert_eq!(inv.matrix(), &scalar(1, 2));
        assert_eq!(inv.domain(), &Lattice::scalar(1, &BigInt::from(2)));
        let small = AbelianComm::new(Lattice::scalar(1, &BigInt::from(3)), scalar(2, 1)).unwrap();
        assert_eq!(small.codomain(), &Lattice::scalar(1, &BigInt::from(6)));
        assert!(two.equivalent(&small).unwrap());
        assert!(!two.equivalent(&three).unwrap());
        let swap = AbelianComm::from_matrix(
            RationalMatrix::from_i64(&[vec![0, 1], vec![1, 0]]).unwrap(),
        )
        .unwrap();
        assert!(swap.compose(&swap).unwrap().equivalent(&AbelianComm::identity(2)).unwrap());
    }

    #[test]
    fn preimage_matches_membership() {
        let m = RationalMatrix::parse_rows(&["2/3 1", "0 -1/2"], 2, 1).unwrap();
        let c = AbelianComm::from_matrix(m).unwrap();
        let target = Lattice::from_generators(2, &[IntVector::from_i64s(&[3, 1]), IntVector::from_i64s(&[0, 2])]).unwrap();
        let pre = c.preimage(&target).unwrap();
        for x in -15i64..=15 {
            for y in -15i64..=15 {
                let v = IntVector::from_i64s(&[x, y]);
                let expect = c.domain().contains(&v).unwrap()
                    && target.contains(&c.apply(&v).unwrap()).unwrap();
                assert_eq!(pre.contains(&v).unwrap(), expect, "{v}");
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(AbelianComm::from_matrix(scalar(0, 1)), Err(Error::Singular));
        assert!(AbelianComm::new(Lattice::whole(1), scalar(1, 2)).is_err());
        let two = AbelianComm::from_matrix(scalar(2, 1)).unwrap();
        assert!(two.invert().unwrap().restrict(&Lattice::whole(1)).is_err());
    }
}
