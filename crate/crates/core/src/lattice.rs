//! Even integral lattices embedded in a rational root frame.
//!
//! A [`Frame`] is a rational vector space `Q^n` with an integral symmetric
//! form. Every lattice lives in one frame and stores its basis as rational
//! row vectors there, so sublattices and overlattices of the same
//! construction can be compared point for point.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactlin::{self, Int, IntMatrix, LinAlgError, Rat, RatMatrix, Signature};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error("frame mismatch: '{left}' vs '{right}'")]
    FrameMismatch { left: String, right: String },
    #[error("vector has {found} coordinates, frame '{frame}' has dimension {expected}")]
    WrongLength { frame: String, expected: usize, found: usize },
    #[error("denominator must be positive")]
    BadDenominator,
    #[error("lattice '{name}': Gram matrix is not integral")]
    NonIntegral { name: String },
    #[error("lattice '{name}' is odd: basis vector {index} has square {square}")]
    Odd { name: String, index: usize, square: Int },
    #[error("lattice '{name}' is degenerate")]
    Degenerate { name: String },
    #[error("basis vectors are linearly dependent: relation {relation:?}")]
    Dependent { relation: Vec<Int> },
    #[error("{expected} basis names required, {found} given")]
    NameCount { expected: usize, found: usize },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("vector is not in the lattice")]
    NotInLattice,
}

/// A rational coordinate space with an integral symmetric bilinear form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Frame {
    name: String,
    gram: IntMatrix,
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Frame({})", self.name)
    }
}

impl Frame {
    /// The form may be degenerate (configuration frames are spanned by
    /// dependent generators); lattices inside it must not be.
    pub fn new(name: impl Into<String>, gram: IntMatrix) -> Result<Arc<Self>, LatticeError> {
        if !gram.is_square() {
            return Err(LinAlgError::NotSquare { rows: gram.rows(), cols: gram.cols() }.into());
        }
        if !gram.is_symmetric() {
            let (row, col) = (0..gram.rows())
                .flat_map(|r| (0..gram.cols()).map(move |c| (r, c)))
                .find(|&(r, c)| gram[(r, c)] != gram[(c, r)])
                .unwrap_or((0, 0));
            return Err(LinAlgError::NotSymmetric { row, col }.into());
        }
        Ok(Arc::new(Self { name: name.into(), gram }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    fn form_num(&self, x: &[Int], y: &[Int]) -> Int {
        let mut acc = Int::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let mut row = Int::zero();
            for (j, yj) in y.iter().enumerate() {
                let g = &self.gram[(i, j)];
                if !g.is_zero() && !yj.is_zero() {
                    row += g * yj;
                }
            }
            if !row.is_zero() {
                acc += xi * row;
            }
        }
        acc
    }
}

/// A rational vector in a frame, stored as integer numerators over a
/// minimal positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FrameVector {
    frame: Arc<Frame>,
    num: Vec<Int>,
    den: Int,
}

impl fmt::Debug for FrameVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, n) in self.num.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")?;
        if !self.den.is_one() {
            write!(f, "/{}", self.den)?;
        }
        Ok(())
    }
}

impl FrameVector {
    pub fn new(frame: &Arc<Frame>, num: Vec<Int>, den: Int) -> Result<Self, LatticeError> {
        if num.len() != frame.dim() {
            return Err(LatticeError::WrongLength {
                frame: frame.name.clone(),
                expected: frame.dim(),
                found: num.len(),
            });
        }
        if !den.is_positive() {
            return Err(LatticeError::BadDenominator);
        }
        let mut v = Self { frame: frame.clone(), num, den };
        v.reduce();
        Ok(v)
    }

    pub fn from_rationals(frame: &Arc<Frame>, coords: &[Rat]) -> Result<Self, LatticeError> {
        let den = exactlin::common_denominator(coords.iter());
        let num = coords.iter().map(|c| (c * Rat::from_integer(den.clone())).to_integer()).collect();
        Self::new(frame, num, den)
    }

    pub fn from_i64(frame: &Arc<Frame>, num: &[i64], den: i64) -> Result<Self, LatticeError> {
        Self::new(frame, num.iter().map(|&x| Int::from(x)).collect(), Int::from(den))
    }

    pub fn zero(frame: &Arc<Frame>) -> Self {
        Self { frame: frame.clone(), num: vec![Int::zero(); frame.dim()], den: Int::one() }
    }

    /// The `i`-th coordinate unit vector.
    pub fn unit(frame: &Arc<Frame>, i: usize) -> Self {
        let mut v = Self::zero(frame);
        v.num[i] = Int::one();
        v
    }

    fn reduce(&mut self) {
        let g = self.num.iter().fold(self.den.clone(), |acc, x| acc.gcd(x));
        if !g.is_one() && !g.is_zero() {
            for x in &mut self.num {
                *x /= &g;
            }
            self.den /= &g;
        }
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn numerators(&self) -> &[Int] {
        &self.num
    }

    pub fn denominator(&self) -> &Int {
        &self.den
    }

    pub fn coords(&self) -> Vec<Rat> {
        self.num.iter().map(|n| Rat::new(n.clone(), self.den.clone())).collect()
    }

    pub fn coord(&self, i: usize) -> Rat {
        Rat::new(self.num[i].clone(), self.den.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    fn check_frame(&self, other: &Self) -> Result<(), LatticeError> {
        if Arc::ptr_eq(&self.frame, &other.frame) || self.frame == other.frame {
            Ok(())
        } else {
            Err(LatticeError::FrameMismatch {
                left: self.frame.name.clone(),
                right: other.frame.name.clone(),
            })
        }
    }

    fn combine(&self, other: &Self, k: &Rat) -> Result<Self, LatticeError> {
        self.check_frame(other)?;
        // a/p + (u/v)(b/q) = (a·v·q + u·b·p) / (p·v·q)
        let left = k.denom() * &other.den;
        let right = k.numer() * &self.den;
        let num = self.num.iter().zip(&other.num).map(|(a, b)| a * &left + b * &right).collect();
        Self::new(&self.frame, num, &self.den * &left)
    }

    pub fn add(&self, other: &Self) -> Result<Self, LatticeError> {
        self.combine(other, &Rat::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LatticeError> {
        self.combine(other, &-Rat::one())
    }

    pub fn scale(&self, k: &Rat) -> Self {
        let num = self.num.iter().map(|a| a * k.numer()).collect();
        Self::new(&self.frame, num, &self.den * k.denom()).expect("same frame and length")
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&Rat::from_integer(Int::from(k)))
    }

    pub fn half(&self) -> Self {
        self.scale(&Rat::new(Int::one(), Int::from(2)))
    }

    /// Moves the vector to an identical frame object (same name and form).
    pub fn rehome(&self, frame: &Arc<Frame>) -> Result<Self, LatticeError> {
        if **frame != *self.frame {
            return Err(LatticeError::FrameMismatch {
                left: self.frame.name.clone(),
                right: frame.name.clone(),
            });
        }
        Ok(Self { frame: frame.clone(), num: self.num.clone(), den: self.den.clone() })
    }

    /// Sum of `k_i · v_i`.
    pub fn linear_combination(frame: &Arc<Frame>, terms: &[(i64, &FrameVector)]) -> Result<Self, LatticeError> {
        terms.iter().try_fold(Self::zero(frame), |acc, (k, v)| acc.combine(v, &Rat::from_integer(Int::from(*k))))
    }
}

/// `x · y` in the shared frame.
pub fn inner(x: &FrameVector, y: &FrameVector) -> Result<Rat, LatticeError> {
    x.check_frame(y)?;
    let n = x.frame.form_num(&x.num, &y.num);
    Ok(Rat::new(n, &x.den * &y.den))
}

/// `x · y` for vectors known to have an integral pairing.
pub fn inner_int(x: &FrameVector, y: &FrameVector) -> Result<Int, LatticeError> {
    let r = inner(x, y)?;
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(LatticeError::NotInLattice)
    }
}

/// A nondegenerate even lattice with a named basis inside a frame.
#[derive(Clone, PartialEq, Eq)]
pub struct IntegerLattice {
    name: String,
    frame: Arc<Frame>,
    basis: RatMatrix,
    gram: IntMatrix,
    basis_names: Vec<String>,
    solver: Arc<Solver>,
}

/// Smith data of the transposed numerator basis, reused by every membership query.
#[derive(Clone, PartialEq, Eq)]
struct Solver {
    den: Int,
    smith: exactlin::Smith,
}

impl fmt::Debug for IntegerLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntegerLattice")
            .field("name", &self.name)
            .field("frame", &self.frame.name)
            .field("gram", &self.gram)
            .finish()
    }
}

fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("b{i}")).collect()
}

impl IntegerLattice {
    /// A lattice that is its own frame: basis is the identity.
    pub fn from_gram(name: impl Into<String>, gram: IntMatrix, basis_names: Vec<String>) -> Result<Self, LatticeError> {
        let name = name.into();
        let n = gram.rows();
        let frame = Frame::new(name.clone(), gram)?;
        Self::in_frame(name, &frame, RatMatrix::identity(n), basis_names)
    }

    /// A lattice whose basis rows are given in `frame` coordinates.
    pub fn in_frame(
        name: impl Into<String>,
        frame: &Arc<Frame>,
        basis: RatMatrix,
        basis_names: Vec<String>,
    ) -> Result<Self, LatticeError> {
        let name = name.into();
        if basis.cols() != frame.dim() {
            return Err(LatticeError::WrongLength {
                frame: frame.name.clone(),
                expected: frame.dim(),
                found: basis.cols(),
            });
        }
        let basis_names = if basis_names.is_empty() { default_names(basis.rows()) } else { basis_names };
        if basis_names.len() != basis.rows() {
            return Err(LatticeError::NameCount { expected: basis.rows(), found: basis_names.len() });
        }
        let (bnum, den) = basis.to_common_denominator();
        let smith = exactlin::smith_normal_form(&bnum.transpose());
        if smith.rank < basis.rows() {
            let relation = (0..basis.rows()).map(|r| smith.right[(r, smith.rank)].clone()).collect();
            return Err(LatticeError::Dependent { relation });
        }
        let g = frame.gram.to_rational().congruent(&basis)?;
        if !g.is_integral() {
            return Err(LatticeError::NonIntegral { name });
        }
        let gram = g.map(|x| x.to_integer());
        for i in 0..gram.rows() {
            if gram[(i, i)].is_odd() {
                return Err(LatticeError::Odd { name, index: i, square: gram[(i, i)].clone() });
            }
        }
        if exactlin::det(&gram)?.is_zero() {
            return Err(LatticeError::Degenerate { name });
        }
        Ok(Self { name, frame: frame.clone(), basis, gram, basis_names, solver: Arc::new(Solver { den, smith }) })
    }

    /// The lattice spanned by arbitrary (possibly dependent) generators.
    pub fn from_generators(name: impl Into<String>, frame: &Arc<Frame>, gens: &[FrameVector]) -> Result<Self, LatticeError> {
        let rows = gens.iter().map(|g| g.rehome(frame).map(|g| g.coords())).collect::<Result<Vec<_>, _>>()?;
        let m = RatMatrix::from_rows(rows)?;
        let (num, den) = m.to_common_denominator();
        let span = exactlin::row_span_basis(&num);
        let basis = span.to_rational().map(|x| x / Rat::from_integer(den.clone()));
        Self::in_frame(name, frame, basis, Vec::new())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    /// Basis rows in frame coordinates.
    pub fn basis_matrix(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    /// True when the basis is the identity of its own frame.
    pub fn is_root(&self) -> bool {
        self.basis == RatMatrix::identity(self.frame.dim())
    }

    pub fn det(&self) -> Int {
        exactlin::det(&self.gram).expect("gram is square")
    }

    pub fn signature(&self) -> Signature {
        exactlin::signature(&self.gram).expect("gram is symmetric")
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[(i, i)].is_even())
    }

    pub fn basis_vector(&self, i: usize) -> FrameVector {
        FrameVector::from_rationals(&self.frame, self.basis.row(i)).expect("basis row has frame length")
    }

    pub fn basis_vectors(&self) -> Vec<FrameVector> {
        (0..self.rank()).map(|i| self.basis_vector(i)).collect()
    }

    pub fn named(&self, label: &str) -> Option<FrameVector> {
        self.basis_names.iter().position(|n| n == label).map(|i| self.basis_vector(i))
    }

    /// The lattice point with the given integer coordinates in this basis.
    pub fn point(&self, coords: &[Int]) -> Result<FrameVector, LatticeError> {
        let row = self.basis.to_rational_row_combination(coords)?;
        FrameVector::from_rationals(&self.frame, &row)
    }

    fn check_vector(&self, x: &FrameVector) -> Result<(), LatticeError> {
        if *x.frame == *self.frame {
            Ok(())
        } else {
            Err(LatticeError::FrameMismatch { left: self.frame.name.clone(), right: x.frame.name.clone() })
        }
    }

    /// Integer coordinates of `x` in this basis, if `x` is a lattice point.
    pub fn coordinates(&self, x: &FrameVector) -> Result<Option<Vec<Int>>, LatticeError> {
        self.check_vector(x)?;
        // c · B = x with B = Bn / bd and x = xn / xd  <=>  Bn^T c = xn · bd / xd
        let bd = &self.solver.den;
        let mut rhs = Vec::with_capacity(x.num.len());
        for n in &x.num {
            let (q, r) = (n * bd).div_rem(&x.den);
            if !r.is_zero() {
                return Ok(None);
            }
            rhs.push(q);
        }
        Ok(exactlin::solve_with_smith(&self.solver.smith, &rhs))
    }

    pub fn contains(&self, x: &FrameVector) -> Result<bool, LatticeError> {
        Ok(self.coordinates(x)?.is_some())
    }

    /// Rational coordinates of `x` in this basis, if `x` lies in its span.
    pub fn rational_coordinates(&self, x: &FrameVector) -> Result<Option<Vec<Rat>>, LatticeError> {
        self.check_vector(x)?;
        let scale = x.den.clone();
        // Scaling x by its denominator and by bd reduces to an integral problem
        // over Q: solve Bn^T c' = xn · bd, then c = c' / xd.
        let rhs: Vec<Int> = x.num.iter().map(|n| n * &self.solver.den).collect();
        let s = &self.solver.smith;
        let ub: Vec<Int> = (0..s.left.rows())
            .map(|i| s.left.row(i).iter().zip(&rhs).map(|(u, v)| u * v).sum())
            .collect();
        let mut y = vec![Rat::zero(); self.rank()];
        for (i, ubi) in ub.iter().enumerate() {
            if i < s.rank {
                y[i] = Rat::new(ubi.clone(), s.diag[(i, i)].clone());
            } else if !ubi.is_zero() {
                return Ok(None);
            }
        }
        let right = s.right.to_rational();
        let c: Vec<Rat> = (0..self.rank())
            .map(|i| right.row(i).iter().zip(&y).map(|(v, yi)| v * yi).sum::<Rat>() / Rat::from_integer(scale.clone()))
            .collect();
        Ok(Some(c))
    }

    /// Dual-lattice membership: integral pairing with every basis vector.
    pub fn in_dual(&self, x: &FrameVector) -> Result<bool, LatticeError> {
        self.check_vector(x)?;
        for b in self.basis_vectors() {
            if !inner(x, &b)?.is_integer() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Same point set in the same frame.
    pub fn same_points(&self, other: &Self) -> Result<bool, LatticeError> {
        if *self.frame != *other.frame {
            return Err(LatticeError::FrameMismatch { left: self.frame.name.clone(), right: other.frame.name.clone() });
        }
        if self.rank() != other.rank() {
            return Ok(false);
        }
        for b in self.basis_vectors() {
            if !other.contains(&b.rehome(&other.frame)?)? {
                return Ok(false);
            }
        }
        for b in other.basis_vectors() {
            if !self.contains(&b.rehome(&self.frame)?)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Re-expresses this lattice with a new basis given by integer
    /// coordinate rows; the change of basis must be unimodular.
    pub fn rebased(&self, name: impl Into<String>, coords: &IntMatrix, names: Vec<String>) -> Result<Self, LatticeError> {
        let d = exactlin::det(coords)?;
        if !d.abs().is_one() {
            return Err(LatticeError::NotInLattice);
        }
        let basis = coords.to_rational().mul(&self.basis)?;
        Self::in_frame(name, &self.frame, basis, names)
    }
}

trait RowCombination {
    fn to_rational_row_combination(&self, coords: &[Int]) -> Result<Vec<Rat>, LatticeError>;
}

impl RowCombination for RatMatrix {
    fn to_rational_row_combination(&self, coords: &[Int]) -> Result<Vec<Rat>, LatticeError> {
        let c: Vec<Rat> = coords.iter().map(|x| Rat::from_integer(x.clone())).collect();
        Ok(self.left_mul_vec(&c)?)
    }
}

/// Primitive closure of `span(gens)` inside `l`, with the index of the span in it.
pub fn saturation(l: &IntegerLattice, gens: &[FrameVector]) -> Result<(IntegerLattice, Int), LatticeError> {
    let mut rows = Vec::with_capacity(gens.len());
    for g in gens {
        rows.push(l.coordinates(g)?.ok_or(LatticeError::NotInLattice)?);
    }
    let g = IntMatrix::from_rows(rows)?;
    let s = exactlin::smith_normal_form(&g);
    if s.rank < gens.len() {
        return Err(LatticeError::Dependent { relation: s.left.row(s.rank).to_vec() });
    }
    let index = s.diagonal().iter().fold(Int::one(), |acc, d| acc * d);
    let coords = s.right_inv.select_rows(&(0..s.rank).collect::<Vec<_>>());
    let basis = coords.to_rational().mul(l.basis_matrix())?;
    let sat = IntegerLattice::in_frame(format!("sat({})", l.name()), l.frame(), basis, Vec::new())?;
    Ok((sat, index))
}

/// Whether `ambient / sub` is torsion free.
pub fn is_primitive(ambient: &IntegerLattice, sub: &IntegerLattice) -> Result<bool, LatticeError> {
    let gens = sub.basis_vectors().iter().map(|v| v.rehome(ambient.frame())).collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::with_capacity(gens.len());
    for g in &gens {
        match ambient.coordinates(g)? {
            Some(c) => rows.push(c),
            None => return Ok(false),
        }
    }
    let s = exactlin::smith_normal_form(&IntMatrix::from_rows(rows)?);
    Ok(s.rank == sub.rank() && s.diagonal().iter().all(One::is_one))
}

/// Checks that `map` (row `i` = image of `a`'s `i`-th basis vector in `b`'s
/// basis coordinates) is an isometry onto `b`.
pub fn isometry_from_basis_map(a: &IntegerLattice, b: &IntegerLattice, map: &RatMatrix) -> Result<bool, LatticeError> {
    if a.rank() != b.rank() {
        return Err(LatticeError::RankMismatch { left: a.rank(), right: b.rank() });
    }
    if map.rows() != a.rank() || map.cols() != b.rank() {
        return Err(LatticeError::RankMismatch { left: map.rows(), right: a.rank() });
    }
    if !map.is_integral() {
        return Ok(false);
    }
    let m = map.map(|x| x.to_integer());
    if !exactlin::det(&m)?.abs().is_one() {
        return Ok(false);
    }
    Ok(b.gram().congruent(&m)? == *a.gram())
}

/// Generator-level variant: checks that `images` reproduce `gen_gram` and
/// span `target`. When the generators' radical is the kernel of the induced
/// map this is an isometry `Z^k / rad -> target`.
pub fn generators_map_onto(gen_gram: &IntMatrix, target: &IntegerLattice, images: &[FrameVector]) -> Result<bool, LatticeError> {
    if images.len() != gen_gram.rows() {
        return Err(LatticeError::RankMismatch { left: images.len(), right: gen_gram.rows() });
    }
    for (i, x) in images.iter().enumerate() {
        for (j, y) in images.iter().enumerate() {
            if inner(x, y)? != Rat::from_integer(gen_gram[(i, j)].clone()) {
                return Ok(false);
            }
        }
    }
    let mut rows = Vec::new();
    for x in images {
        match target.coordinates(x)? {
            Some(c) => rows.push(c),
            None => return Ok(false),
        }
    }
    let s = exactlin::smith_normal_form(&IntMatrix::from_rows(rows)?);
    Ok(s.rank == target.rank() && s.diagonal().iter().all(One::is_one))
}

/// All vectors `x` (integer coordinates, up to sign) with `0 < x^T G x <= bound`
/// for a positive definite `G`. Exact Fincke-Pohst over the rationals.
pub fn short_vectors(gram: &IntMatrix, bound: &Int) -> Result<Vec<Vec<Int>>, LatticeError> {
    let n = gram.rows();
    let sig = exactlin::signature(gram)?;
    if sig.positive != n {
        return Err(LatticeError::Degenerate { name: "short-vector form must be positive definite".to_string() });
    }
    // Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2
    let mut q = gram.to_rational();
    for i in 0..n {
        for j in i + 1..n {
            let v = &q[(i, j)] / &q[(i, i)];
            q[(j, i)] = q[(i, j)].clone();
            q[(i, j)] = v;
        }
        for k in i + 1..n {
            for l in k..n {
                let v = &q[(k, i)] * &q[(i, l)];
                q[(k, l)] -= v;
            }
        }
    }
    let mut out = Vec::new();
    let mut x = vec![Int::zero(); n];
    let bound = Rat::from_integer(bound.clone());
    fp_recurse(&q, n, &bound, &mut x, &mut out);
    // keep one of each +-x pair: first nonzero coordinate positive
    out.retain(|v: &Vec<Int>| v.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_positive()));
    Ok(out)
}

fn fp_recurse(q: &RatMatrix, level: usize, remaining: &Rat, x: &mut Vec<Int>, out: &mut Vec<Vec<Int>>) {
    if level == 0 {
        if x.iter().any(|c| !c.is_zero()) {
            out.push(x.clone());
        }
        return;
    }
    let i = level - 1;
    let n = x.len();
    let center: Rat = -(i + 1..n).map(|j| &q[(i, j)] * Rat::from_integer(x[j].clone())).sum::<Rat>();
    // (x_i - center)^2 <= remaining / q_ii
    let radius_sq = remaining / &q[(i, i)];
    let r = rat_sqrt_floor_bound(&radius_sq);
    let lo = (&center - &r).floor().to_integer();
    let hi = (&center + &r).ceil().to_integer();
    let mut xi = lo;
    while xi <= hi {
        let t = Rat::from_integer(xi.clone()) - &center;
        let used = &q[(i, i)] * &t * &t;
        if used <= *remaining {
            x[i] = xi.clone();
            fp_recurse(q, i, &(remaining - used), x, out);
        }
        xi += 1;
    }
    x[i] = Int::zero();
}

/// An integer upper bound on `sqrt(r)` for `r >= 0`.
fn rat_sqrt_floor_bound(r: &Rat) -> Rat {
    let c = r.ceil().to_integer();
    let s = c.sqrt();
    let s = if &s * &s < c { s + 1 } else { s };
    Rat::from_integer(s)
}

/// Converts small integer vectors for display.
pub fn to_i64_vec(v: &[Int]) -> Option<Vec<i64>> {
    v.iter().map(ToPrimitive::to_i64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_frame(name: &str, d: &[i64]) -> Arc<Frame> {
        let g = IntMatrix::diagonal(&d.iter().map(|&x| Int::from(x)).collect::<Vec<_>>());
        Frame::new(name, g).unwrap()
    }

    #[test]
    fn from_generators_and_saturation() {
        let f = diag_frame("A1^2", &[-2, -2]);
        let e1 = FrameVector::unit(&f, 0);
        let e2 = FrameVector::unit(&f, 1);
        let l = IntegerLattice::from_generators("A", &f, &[e1.clone(), e2.clone()]).unwrap();
        let two = e1.scale_int(2);
        let (sat, idx) = saturation(&l, &[two]).unwrap();
        assert_eq!(idx, Int::from(2));
        assert_eq!(sat.rank(), 1);
        assert!(saturation(&l, &[e1.clone(), e1.scale_int(3)]).is_err());
    }

    #[test]
    fn odd_lattice_rejected() {
        let g = IntMatrix::from_i64_rows(&[&[1]]).unwrap();
        assert!(matches!(IntegerLattice::from_gram("Z", g, Vec::new()), Err(LatticeError::Odd { .. })));
    }

    #[test]
    fn short_vectors_a2() {
        let g = IntMatrix::from_i64_rows(&[&[2, -1], &[-1, 2]]).unwrap();
        let sv = short_vectors(&g, &Int::from(2)).unwrap();
        assert_eq!(sv.len(), 3);
    }
}
