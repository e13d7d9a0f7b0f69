//! Discriminant groups `L^dual / L`.

use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::One;

use crate::exactlin::{self, Int, Rat};
use crate::lattice::{inner, FrameVector, IntegerLattice, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiscError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("lattice is degenerate")]
    Degenerate,
    #[error("vector does not pair integrally with the lattice")]
    NotInDual,
}

/// A generator of the discriminant group with its order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminantLift {
    pub order: Int,
    /// Coordinates in the lattice basis are `numerators / order`, each in `[0, order)`.
    pub numerators: Vec<Int>,
    pub vector: FrameVector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminantGroup {
    pub invariant_factors: Vec<Int>,
    pub order: Int,
    pub lifts: Vec<DiscriminantLift>,
}

impl DiscriminantGroup {
    /// Invariant factors as machine integers, for display.
    pub fn factors_u64(&self) -> Vec<u64> {
        self.invariant_factors.iter().map(|f| u64::try_from(f).unwrap_or(u64::MAX)).collect()
    }
}

pub fn discriminant_group(l: &IntegerLattice) -> Result<DiscriminantGroup, DiscError> {
    let g = l.gram();
    let s = exactlin::smith_normal_form(g);
    if s.rank < g.rows() {
        return Err(DiscError::Degenerate);
    }
    // G^{-1} Z^n = V D^{-1} Z^n, so column i of V over d_i generates a cyclic factor.
    let mut invariant_factors = Vec::new();
    let mut lifts = Vec::new();
    for i in 0..s.rank {
        let d = s.diag[(i, i)].clone();
        if d.is_one() {
            continue;
        }
        let numerators: Vec<Int> = (0..g.rows()).map(|r| s.right[(r, i)].mod_floor(&d)).collect();
        let coords: Vec<Rat> = numerators.iter().map(|n| Rat::new(n.clone(), d.clone())).collect();
        let frame_coords = l.basis_matrix().left_mul_vec(&coords).map_err(LatticeError::from)?;
        let vector = FrameVector::from_rationals(l.frame(), &frame_coords)?;
        invariant_factors.push(d.clone());
        lifts.push(DiscriminantLift { order: d, numerators, vector });
    }
    let order = invariant_factors.iter().fold(Int::one(), |acc, f| acc * f);
    Ok(DiscriminantGroup { invariant_factors, order, lifts })
}

/// `x · x` modulo `2Z`, in `[0, 2)`.
pub fn discriminant_form(l: &IntegerLattice, x: &FrameVector) -> Result<Rat, DiscError> {
    if !l.in_dual(x)? {
        return Err(DiscError::NotInDual);
    }
    let q = inner(x, x)?;
    let two = Rat::from_integer(Int::from(2));
    let k = (&q / &two).floor();
    Ok(q - k * two)
}

pub fn groups_isomorphic(a: &DiscriminantGroup, b: &DiscriminantGroup) -> bool {
    a.invariant_factors == b.invariant_factors
}

/// Order of `x` modulo `l` (the smallest `k > 0` with `k x` in `l`), for `x` in the dual.
pub fn order_mod(l: &IntegerLattice, x: &FrameVector) -> Result<Int, DiscError> {
    let coords = l.rational_coordinates(x)?.ok_or(DiscError::NotInDual)?;
    Ok(coords.iter().fold(Int::one(), |acc, c| acc.lcm(c.denom())))
}

/// True when every pairing of `x` with the lattice is an integer and `x` is not zero.
pub fn is_nontrivial_class(l: &IntegerLattice, x: &FrameVector) -> Result<bool, DiscError> {
    Ok(l.in_dual(x)? && !l.contains(x)? && !x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::IntMatrix;
    use alloc::vec;
    use num_traits::Zero;

    #[test]
    fn a1_squared() {
        let g = IntMatrix::from_i64_rows(&[&[-2, 0], &[0, -2]]).unwrap();
        let l = IntegerLattice::from_gram("A1(-1)^2", g, Vec::new()).unwrap();
        let a = discriminant_group(&l).unwrap();
        assert_eq!(a.invariant_factors, vec![Int::from(2), Int::from(2)]);
        for lift in &a.lifts {
            assert!(l.in_dual(&lift.vector).unwrap());
            assert!(l.contains(&lift.vector.scale(&Rat::from_integer(lift.order.clone()))).unwrap());
            assert_eq!(order_mod(&l, &lift.vector).unwrap(), lift.order);
        }
        let x = FrameVector::from_i64(l.frame(), &[1, 1], 2).unwrap();
        assert_eq!(discriminant_form(&l, &x).unwrap(), Rat::one());
        assert!(Rat::zero() <= discriminant_form(&l, &a.lifts[0].vector).unwrap());
    }
}
