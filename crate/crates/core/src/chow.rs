//! Intersection numbers on complete intersections in products of projective spaces.
//!
//! Classes live in `Z[h_1..h_k] / (h_i^{n_i+1})`, stored densely over the
//! exponent box.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::Zero;

use crate::exactlin::{Int, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChowError {
    #[error("a product of projective spaces needs at least one factor")]
    NoFactors,
    #[error("projective factor dimensions must be positive")]
    ZeroDimension,
    #[error("multidegree {index} has {found} entries, expected {expected}")]
    DegreeLength { index: usize, expected: usize, found: usize },
    #[error("complete intersection has dimension {dimension}, not a surface (ambient {ambient}, {count} hypersurfaces)")]
    NotSurface { ambient: usize, count: usize, dimension: isize },
    #[error("cannot parse {input:?}: {reason}; expected {grammar}")]
    Parse { input: String, reason: String, grammar: &'static str },
}

pub const CHOW_GRAMMAR: &str = "P<n1>xP<n2>...: (a,b,...)[^k] + (c,d,...)[^k] + ...";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiProjSpace {
    dims: Vec<usize>,
}

impl MultiProjSpace {
    pub fn new(dims: Vec<usize>) -> Result<Self, ChowError> {
        if dims.is_empty() {
            return Err(ChowError::NoFactors);
        }
        if dims.contains(&0) {
            return Err(ChowError::ZeroDimension);
        }
        Ok(Self { dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn factors(&self) -> usize {
        self.dims.len()
    }

    pub fn dimension(&self) -> usize {
        self.dims.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompleteIntersection {
    space: MultiProjSpace,
    multidegrees: Vec<Vec<u32>>,
}

impl CompleteIntersection {
    pub fn new(space: MultiProjSpace, multidegrees: Vec<Vec<u32>>) -> Result<Self, ChowError> {
        let k = space.factors();
        for (index, m) in multidegrees.iter().enumerate() {
            if m.len() != k {
                return Err(ChowError::DegreeLength { index, expected: k, found: m.len() });
            }
        }
        Ok(Self { space, multidegrees })
    }

    pub fn space(&self) -> &MultiProjSpace {
        &self.space
    }

    pub fn multidegrees(&self) -> &[Vec<u32>] {
        &self.multidegrees
    }

    fn check_surface(&self) -> Result<(), ChowError> {
        let ambient = self.space.dimension();
        let count = self.multidegrees.len();
        let dimension = ambient as isize - count as isize;
        if dimension != 2 {
            return Err(ChowError::NotSurface { ambient, count, dimension });
        }
        Ok(())
    }
}

impl fmt::Display for CompleteIntersection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<String> = self.space.dims.iter().map(|n| alloc::format!("P{n}")).collect();
        write!(f, "{}: ", factors.join("x"))?;
        // group consecutive equal multidegrees
        let mut first = true;
        let mut i = 0;
        while i < self.multidegrees.len() {
            let m = &self.multidegrees[i];
            let mut j = i + 1;
            while j < self.multidegrees.len() && self.multidegrees[j] == *m {
                j += 1;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            let parts: Vec<String> = m.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(","))?;
            if j - i > 1 {
                write!(f, "^{}", j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

impl FromStr for CompleteIntersection {
    type Err = ChowError;

    fn from_str(input: &str) -> Result<Self, ChowError> {
        let fail = |reason: &str| ChowError::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
            grammar: CHOW_GRAMMAR,
        };
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let (space, degs) = compact.split_once(':').ok_or_else(|| fail("missing ':'"))?;
        let mut dims = Vec::new();
        for factor in space.split(['x', 'X', '×']) {
            let n = factor
                .strip_prefix('P')
                .or_else(|| factor.strip_prefix('p'))
                .ok_or_else(|| fail("factor must look like P<n>"))?;
            dims.push(n.parse::<usize>().map_err(|_| fail("bad factor dimension"))?);
        }
        let space = MultiProjSpace::new(dims)?;
        let mut multidegrees = Vec::new();
        if !degs.is_empty() {
            for term in degs.split('+') {
                let (tuple, reps) = match term.split_once('^') {
                    Some((t, r)) => (t, r.parse::<usize>().map_err(|_| fail("bad repetition count"))?),
                    None => (term, 1),
                };
                let inner = tuple
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| fail("multidegree must be parenthesized"))?;
                let degree: Vec<u32> = inner
                    .split(',')
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<u32>().map_err(|_| fail("bad degree")))
                    .collect::<Result<_, _>>()?;
                for _ in 0..reps {
                    multidegrees.push(degree.clone());
                }
            }
        }
        CompleteIntersection::new(space, multidegrees)
    }
}

/// A class in the truncated ring, stored over the exponent box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedPoly {
    dims: Vec<usize>,
    coeffs: Vec<Int>,
}

impl TruncatedPoly {
    fn len_for(dims: &[usize]) -> usize {
        dims.iter().map(|n| n + 1).product()
    }

    pub fn one(dims: &[usize]) -> Self {
        let mut coeffs = vec![Int::zero(); Self::len_for(dims)];
        coeffs[0] = Int::from(1);
        Self { dims: dims.to_vec(), coeffs }
    }

    /// `sum_j c_j h_j`.
    pub fn linear(dims: &[usize], c: &[u32]) -> Self {
        let mut p = Self { dims: dims.to_vec(), coeffs: vec![Int::zero(); Self::len_for(dims)] };
        for (j, &cj) in c.iter().enumerate() {
            let mut e = vec![0; dims.len()];
            e[j] = 1;
            let idx = p.index(&e);
            p.coeffs[idx] = Int::from(cj);
        }
        p
    }

    fn index(&self, e: &[usize]) -> usize {
        e.iter().zip(&self.dims).fold(0, |acc, (&x, &n)| acc * (n + 1) + x)
    }

    fn exponents(&self, mut idx: usize) -> Vec<usize> {
        let mut e = vec![0; self.dims.len()];
        for j in (0..self.dims.len()).rev() {
            e[j] = idx % (self.dims[j] + 1);
            idx /= self.dims[j] + 1;
        }
        e
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self { dims: self.dims.clone(), coeffs: vec![Int::zero(); self.coeffs.len()] };
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let ea = self.exponents(i);
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let eb = other.exponents(j);
                let e: Vec<usize> = ea.iter().zip(&eb).map(|(x, y)| x + y).collect();
                if e.iter().zip(&self.dims).all(|(x, n)| x <= n) {
                    let k = out.index(&e);
                    out.coeffs[k] += a * b;
                }
            }
        }
        out
    }

    pub fn coefficient(&self, e: &[usize]) -> Int {
        if e.len() != self.dims.len() || e.iter().zip(&self.dims).any(|(x, n)| x > n) {
            return Int::zero();
        }
        self.coeffs[self.index(e)].clone()
    }
}

/// `Z^{k x k}` matrix of `h_i · h_j` on the surface.
pub fn intersection_matrix(ci: &CompleteIntersection) -> Result<IntMatrix, ChowError> {
    ci.check_surface()?;
    let dims = ci.space.dims();
    let k = dims.len();
    let product = ci
        .multidegrees
        .iter()
        .fold(TruncatedPoly::one(dims), |acc, m| acc.mul(&TruncatedPoly::linear(dims, m)));
    let mut rows = Vec::with_capacity(k);
    for i in 0..k {
        let mut row = Vec::with_capacity(k);
        for j in 0..k {
            let mut hi = vec![0u32; k];
            hi[i] += 1;
            let mut hj = vec![0u32; k];
            hj[j] += 1;
            let p = product.mul(&TruncatedPoly::linear(dims, &hi)).mul(&TruncatedPoly::linear(dims, &hj));
            row.push(p.coefficient(dims));
        }
        rows.push(row);
    }
    Ok(IntMatrix::from_rows(rows).expect("square"))
}

/// Adjunction: the surface has trivial canonical class when each column of degrees sums to `n_j + 1`.
pub fn ci_is_k3(ci: &CompleteIntersection) -> Result<bool, ChowError> {
    ci.check_surface()?;
    Ok(ci.space.dims().iter().enumerate().all(|(j, &n)| {
        ci.multidegrees.iter().map(|m| m[j] as usize).sum::<usize>() == n + 1
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> Vec<Vec<i64>> {
        let ci: CompleteIntersection = s.parse().unwrap();
        let x = intersection_matrix(&ci).unwrap();
        x.row_vecs().into_iter().map(|r| r.iter().map(|v| i64::try_from(v).unwrap()).collect()).collect()
    }

    #[test]
    fn displayed_matrices() {
        assert_eq!(m("P4xP2: (2,0)+(1,1)^3"), [[6, 6], [6, 2]]);
        assert_eq!(m("P1xP2: (2,3)"), [[0, 3], [3, 2]]);
        assert_eq!(m("P3xP3: (1,1)^4"), [[4, 6], [6, 4]]);
        assert_eq!(m("P2xP2: (1,1)+(2,2)"), [[2, 4], [4, 2]]);
        assert_eq!(m("P3: (4)"), [[4]]);
    }

    #[test]
    fn k3_check() {
        assert!(ci_is_k3(&"P4xP2: (2,0)+(1,1)^3".parse().unwrap()).unwrap());
        assert!(ci_is_k3(&"P2xP2: (1,1)+(2,2)".parse().unwrap()).unwrap());
        assert!(!ci_is_k3(&"P3: (3)".parse().unwrap()).unwrap());
        let bad: CompleteIntersection = "P3: (2)^2".parse().unwrap();
        assert!(matches!(ci_is_k3(&bad), Err(ChowError::NotSurface { dimension: 1, .. })));
    }

    #[test]
    fn display_roundtrip() {
        let ci: CompleteIntersection = "P4xP2: (2,0)+(1,1)^3".parse().unwrap();
        assert_eq!(ci.to_string(), "P4xP2: (2,0)+(1,1)^3");
        assert_eq!(ci.to_string().parse::<CompleteIntersection>().unwrap(), ci);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!("P4xP2 (2,0)".parse::<CompleteIntersection>(), Err(ChowError::Parse { .. })));
        assert!(matches!("P4xP2: (2,0,1)".parse::<CompleteIntersection>(), Err(ChowError::DegreeLength { .. })));
        assert!(matches!("P0: (1)".parse::<CompleteIntersection>(), Err(ChowError::ZeroDimension)));
    }
}
