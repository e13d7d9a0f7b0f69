//! Named lattices and the four Néron–Severi families.
//!
//! `L` families live in the root frame `(L, N1, ..., N8)` with form
//! `diag(2d, -2, ..., -2)`; `M` families in `(M, E1, ..., E8)` with form
//! `[2d'] ⊕ E8(-2)`. Sub- and overlattices of one family share its frame.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::{One, Zero};

use crate::disc::{self, DiscError, DiscriminantGroup};
use crate::exactlin::{Int, IntMatrix, Rat, RatMatrix};
use crate::lattice::{self, inner, Frame, FrameVector, IntegerLattice, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Disc(#[from] DiscError),
    #[error("parameter must be positive")]
    NonPositive,
    #[error("no overlattice exists: L^2 = {l2} ≡ 2 mod 4 (d must be even)")]
    OddPrimeL { l2: u64 },
    #[error("M' is constructed only for M^2 ≡ 0 mod 4 (d' even); here M^2 = {m2}")]
    OddPrimeM { m2: u64 },
    #[error("unknown lattice name '{0}'")]
    UnknownName(String),
    #[error("glue is already in the lattice")]
    GlueInLattice,
    #[error("twice the glue is not in the lattice: not an index-2 extension")]
    NotIndexTwo,
    #[error("glue pairs non-integrally with basis vector {index} (value {value})")]
    Integrality { index: usize, value: Rat },
    #[error("adjoined lattice is odd: glue square {square} is not in 2Z")]
    Evenness { square: Rat },
    #[error("support {support:?} is not an admissible glue for d = {d}")]
    Inadmissible { d: u64, support: Vec<usize> },
    #[error("glue equivalence criteria disagree for {left:?} and {right:?}")]
    CriteriaDisagree { left: Vec<usize>, right: Vec<usize> },
    #[error("no explicit K3-lattice embedding is constructed for {0}")]
    NoEmbedding(NsFamily),
}

/// Positive-definite E8 Cartan matrix. Nodes 1..7 form a chain and node 8
/// hangs off node 5, so nodes 1 and 3 are orthogonal.
pub fn e8_cartan() -> IntMatrix {
    let mut g = IntMatrix::identity(8);
    for i in 0..8 {
        g[(i, i)] = Int::from(2);
    }
    let mut link = |a: usize, b: usize| {
        g[(a, b)] = Int::from(-1);
        g[(b, a)] = Int::from(-1);
    };
    for i in 0..6 {
        link(i, i + 1);
    }
    link(4, 7);
    g
}

fn scaled(m: &IntMatrix, k: i64) -> IntMatrix {
    m.map(|x| x * Int::from(k))
}

fn names(prefix: &str, range: core::ops::RangeInclusive<usize>) -> Vec<String> {
    range.map(|i| format!("{prefix}{i}")).collect()
}

fn block_diag(blocks: &[IntMatrix]) -> IntMatrix {
    let n: usize = blocks.iter().map(IntMatrix::rows).sum();
    let mut g = IntMatrix::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        for r in 0..b.rows() {
            for c in 0..b.cols() {
                g[(off + r, off + c)] = b[(r, c)].clone();
            }
        }
        off += b.rows();
    }
    g
}

fn hyperbolic(k: i64) -> IntMatrix {
    IntMatrix::from_i64_rows(&[&[0, k], &[k, 0]]).expect("2x2")
}

/// The rank-22 K3 lattice `U^3 ⊕ E8(-1)^2`.
pub fn k3_lattice() -> IntegerLattice {
    let e8m = scaled(&e8_cartan(), -1);
    let g = block_diag(&[hyperbolic(1), hyperbolic(1), hyperbolic(1), e8m.clone(), e8m]);
    let mut n = vec!["e1", "f1", "e2", "f2", "e3", "f3"].into_iter().map(String::from).collect::<Vec<_>>();
    n.extend(names("a", 1..=8));
    n.extend(names("b", 1..=8));
    IntegerLattice::from_gram("K3", g, n).expect("K3 lattice is even and unimodular")
}

/// Builds one of the fixed named lattices: `N`, `U`, `U(2)`, `E8(-1)`,
/// `E8(-2)`, `K3`.
pub fn make_named(name: &str) -> Result<IntegerLattice, FamilyError> {
    match name {
        "N" => Ok(nikulin()),
        "U" => Ok(IntegerLattice::from_gram("U", hyperbolic(1), vec!["e".into(), "f".into()])?),
        "U(2)" => Ok(IntegerLattice::from_gram("U(2)", hyperbolic(2), vec!["e".into(), "f".into()])?),
        "E8(-1)" => Ok(IntegerLattice::from_gram("E8(-1)", scaled(&e8_cartan(), -1), names("a", 1..=8))?),
        "E8(-2)" => Ok(IntegerLattice::from_gram("E8(-2)", scaled(&e8_cartan(), -2), names("E", 1..=8))?),
        "K3" => Ok(k3_lattice()),
        other => match other.parse::<NsFamily>() {
            Ok(f) => f.make(),
            Err(_) => Err(FamilyError::UnknownName(other.to_string())),
        },
    }
}

fn nikulin_frame() -> Arc<Frame> {
    let g = IntMatrix::diagonal(&vec![Int::from(-2); 8]);
    Frame::new("A1(-1)^8", g).expect("diagonal")
}

fn half() -> Rat {
    Rat::new(Int::one(), Int::from(2))
}

fn unit_row(n: usize, i: usize) -> Vec<Rat> {
    let mut r = vec![Rat::zero(); n];
    r[i] = Rat::one();
    r
}

/// The Nikulin lattice with basis `(N1, ..., N7, Nhat)`.
pub fn nikulin() -> IntegerLattice {
    let f = nikulin_frame();
    let mut rows: Vec<Vec<Rat>> = (0..7).map(|i| unit_row(8, i)).collect();
    rows.push(vec![half(); 8]);
    let mut n = names("N", 1..=7);
    n.push("Nhat".into());
    IntegerLattice::in_frame("N", &f, RatMatrix::from_rows(rows).expect("rect"), n).expect("Nikulin lattice is even")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyKind {
    L,
    LPrime,
    M,
    MPrime,
}

/// The index-2 glue used for `L'` families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GlueFlavor {
    /// `v = N1 + N2`, for `2d ≡ 4 mod 8`.
    Pair,
    /// `v = N1 + N2 + N3 + N4`, for `2d ≡ 0 mod 8`.
    Quadruple,
}

impl GlueFlavor {
    pub fn support(self) -> &'static [usize] {
        match self {
            Self::Pair => &[1, 2],
            Self::Quadruple => &[1, 2, 3, 4],
        }
    }
}

/// A Néron–Severi family; `param` is `d` for `L` kinds and `d'` for `M` kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NsFamily {
    pub kind: FamilyKind,
    pub param: u64,
}

impl NsFamily {
    pub const fn l(d: u64) -> Self {
        Self { kind: FamilyKind::L, param: d }
    }
    pub const fn l_prime(d: u64) -> Self {
        Self { kind: FamilyKind::LPrime, param: d }
    }
    pub const fn m(d: u64) -> Self {
        Self { kind: FamilyKind::M, param: d }
    }
    pub const fn m_prime(d: u64) -> Self {
        Self { kind: FamilyKind::MPrime, param: d }
    }

    /// Self-intersection of the polarization: `2d` or `2d'`.
    pub fn square(&self) -> u64 {
        2 * self.param
    }

    pub fn validate(&self) -> Result<(), FamilyError> {
        if self.param == 0 {
            return Err(FamilyError::NonPositive);
        }
        match self.kind {
            FamilyKind::LPrime if self.param % 2 == 1 => Err(FamilyError::OddPrimeL { l2: self.square() }),
            FamilyKind::MPrime if self.param % 2 == 1 => Err(FamilyError::OddPrimeM { m2: self.square() }),
            _ => Ok(()),
        }
    }

    pub fn is_constructible(&self) -> bool {
        self.validate().is_ok()
    }

    pub fn glue_flavor(&self) -> Option<GlueFlavor> {
        match self.kind {
            FamilyKind::LPrime if self.param % 2 == 0 => {
                Some(if self.square() % 8 == 4 { GlueFlavor::Pair } else { GlueFlavor::Quadruple })
            }
            _ => None,
        }
    }

    pub fn is_l_type(&self) -> bool {
        matches!(self.kind, FamilyKind::L | FamilyKind::LPrime)
    }

    /// The root frame of this family.
    pub fn frame(&self) -> Arc<Frame> {
        if self.is_l_type() {
            l_frame(self.param)
        } else {
            m_frame(self.param)
        }
    }

    /// Constructs the lattice in its normative basis.
    pub fn make(&self) -> Result<IntegerLattice, FamilyError> {
        self.validate()?;
        let d = self.param;
        let name = self.to_string();
        let lat = match self.kind {
            FamilyKind::L => {
                let f = l_frame(d);
                let mut rows: Vec<Vec<Rat>> = (0..8).map(|i| unit_row(9, i)).collect();
                let mut nhat = vec![half(); 9];
                nhat[0] = Rat::zero();
                rows.push(nhat);
                let mut n = vec!["L".to_string()];
                n.extend(names("N", 1..=7));
                n.push("Nhat".into());
                IntegerLattice::in_frame(name, &f, RatMatrix::from_rows(rows).expect("rect"), n)?
            }
            FamilyKind::LPrime => {
                let f = l_frame(d);
                let flavor = self.glue_flavor().expect("validated");
                let mut rows = vec![glue_row(flavor.support())];
                rows.extend((1..8).map(|i| unit_row(9, i)));
                let mut nhat = vec![half(); 9];
                nhat[0] = Rat::zero();
                rows.push(nhat);
                let mut n = vec!["g".to_string()];
                n.extend(names("N", 1..=7));
                n.push("Nhat".into());
                IntegerLattice::in_frame(name, &f, RatMatrix::from_rows(rows).expect("rect"), n)?
            }
            FamilyKind::M => {
                let f = m_frame(d);
                let mut n = vec!["M".to_string()];
                n.extend(names("E", 1..=8));
                IntegerLattice::in_frame(name, &f, RatMatrix::identity(9), n)?
            }
            FamilyKind::MPrime => {
                let f = m_frame(d);
                let mut rows = vec![m_glue_row(d)];
                rows.extend((1..9).map(|i| unit_row(9, i)));
                let mut n = vec!["g".to_string()];
                n.extend(names("E", 1..=8));
                IntegerLattice::in_frame(name, &f, RatMatrix::from_rows(rows).expect("rect"), n)?
            }
        };
        Ok(lat)
    }

    /// The discriminant group predicted by the family's shape:
    /// `Z/2d ⊕ (Z/2)^k` with `k` = 6, 4, 8, 6 for `L`, `L'`, `M`, `M'`.
    pub fn predicted_invariant_factors(&self) -> Vec<Int> {
        let twos = match self.kind {
            FamilyKind::L | FamilyKind::MPrime => 6,
            FamilyKind::LPrime => 4,
            FamilyKind::M => 8,
        };
        let mut f = vec![Int::from(2); twos];
        f.push(Int::from(self.square()));
        f
    }

    pub fn discriminant_group(&self) -> Result<DiscriminantGroup, FamilyError> {
        Ok(disc::discriminant_group(&self.make()?)?)
    }

    /// Partner under the quotient / double-cover correspondence:
    /// `L_{2d} <-> M'_{4d}` and `L'_{4d} <-> M_{2d}`.
    pub fn correspondence(&self) -> NsFamily {
        match self.kind {
            FamilyKind::L => NsFamily::m_prime(2 * self.param),
            FamilyKind::MPrime => NsFamily::l(self.param / 2),
            FamilyKind::LPrime => NsFamily::m(self.param / 2),
            FamilyKind::M => NsFamily::l_prime(2 * self.param),
        }
    }
}

impl fmt::Display for NsFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.square();
        match self.kind {
            FamilyKind::L => write!(f, "L:2d={s}"),
            FamilyKind::LPrime => write!(f, "L':2d={s}"),
            FamilyKind::M => write!(f, "M:2d'={s}"),
            FamilyKind::MPrime => write!(f, "M':2d'={s}"),
        }
    }
}

/// Grammar for family descriptors.
pub const FAMILY_GRAMMAR: &str =
    "family := KIND ':' PARAM '=' N   with KIND in {L, L', M, M'}, PARAM '2d' for L/L' and '2d'' for M/M', N a positive even integer (e.g. \"L:2d=8\", \"M':2d'=8\")";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed family descriptor '{input}': {reason}; expected {grammar}", grammar = FAMILY_GRAMMAR)]
pub struct FamilyParseError {
    pub input: String,
    pub reason: &'static str,
}

impl FromStr for NsFamily {
    type Err = FamilyParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason| FamilyParseError { input: s.to_string(), reason };
        let (kind, rest) = s.trim().split_once(':').ok_or_else(|| err("missing ':'"))?;
        let kind = match kind {
            "L" => FamilyKind::L,
            "L'" => FamilyKind::LPrime,
            "M" => FamilyKind::M,
            "M'" => FamilyKind::MPrime,
            _ => return Err(err("unknown kind")),
        };
        let (param, value) = rest.split_once('=').ok_or_else(|| err("missing '='"))?;
        let expected = if matches!(kind, FamilyKind::L | FamilyKind::LPrime) { "2d" } else { "2d'" };
        if param != expected {
            return Err(err("parameter name does not match the kind"));
        }
        let n: u64 = value.parse().map_err(|_| err("value is not a positive integer"))?;
        if n == 0 || n % 2 == 1 {
            return Err(err("value must be a positive even integer"));
        }
        Ok(NsFamily { kind, param: n / 2 })
    }
}

/// Frame `(L, N1..N8)` with form `diag(2d, -2, ..., -2)`.
pub fn l_frame(d: u64) -> Arc<Frame> {
    let mut diag = vec![Int::from(2 * d)];
    diag.extend(core::iter::repeat(Int::from(-2)).take(8));
    Frame::new(format!("ZL+A1(-1)^8[L^2={}]", 2 * d), IntMatrix::diagonal(&diag)).expect("diagonal")
}

/// Frame `(M, E1..E8)` with form `[2d'] ⊕ E8(-2)`.
pub fn m_frame(d: u64) -> Arc<Frame> {
    let g = block_diag(&[IntMatrix::diagonal(&[Int::from(2 * d)]), scaled(&e8_cartan(), -2)]);
    Frame::new(format!("ZM+E8(-2)[M^2={}]", 2 * d), g).expect("symmetric")
}

/// Row of `(L - sum_{i in S} N_i) / 2` in the L frame.
fn glue_row(support: &[usize]) -> Vec<Rat> {
    let mut r = vec![Rat::zero(); 9];
    r[0] = half();
    for &i in support {
        r[i] = -half();
    }
    r
}

/// Glue `(M - E1)/2` or `(M - E1 - E3)/2` depending on `d' mod 4`.
fn m_glue_row(d: u64) -> Vec<Rat> {
    let mut r = vec![Rat::zero(); 9];
    r[0] = half();
    r[1] = -half();
    if d % 4 == 0 {
        r[3] = -half();
    }
    r
}

/// `ZL ⊕ A1(-1)^8` without the Nikulin glue.
pub fn unglued_l(d: u64) -> IntegerLattice {
    let f = l_frame(d);
    let mut n = vec!["L".to_string()];
    n.extend(names("N", 1..=8));
    IntegerLattice::in_frame(format!("ZL+A1(-1)^8:2d={}", 2 * d), &f, RatMatrix::identity(9), n).expect("diagonal even")
}

/// Named classes of an `L` frame.
#[derive(Debug, Clone)]
pub struct LClasses {
    pub l: FrameVector,
    pub n: [FrameVector; 8],
    pub nhat: FrameVector,
}

impl LClasses {
    pub fn new(frame: &Arc<Frame>) -> Self {
        let n = core::array::from_fn(|i| FrameVector::unit(frame, i + 1));
        let mut nhat_num = vec![Int::one(); 9];
        nhat_num[0] = Int::zero();
        let nhat = FrameVector::new(frame, nhat_num, Int::from(2)).expect("frame length");
        Self { l: FrameVector::unit(frame, 0), n, nhat }
    }

    /// `N_i` for `i` in `1..=8`.
    pub fn n(&self, i: usize) -> &FrameVector {
        &self.n[i - 1]
    }

    /// `sum_{i in S} N_i`.
    pub fn n_sum(&self, support: &[usize]) -> FrameVector {
        support.iter().fold(FrameVector::zero(self.l.frame()), |acc, &i| acc.add(self.n(i)).expect("same frame"))
    }

    /// `(L - sum_{i in S} N_i) / 2`.
    pub fn half_glue(&self, support: &[usize]) -> FrameVector {
        self.l.sub(&self.n_sum(support)).expect("same frame").half()
    }
}

/// A glue vector `v = sum_{i in S} N_i` in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GlueVector {
    pub support: Vec<usize>,
}

impl GlueVector {
    pub fn from_mask(mask: u16) -> Self {
        Self { support: (1..=8).filter(|&i| mask & (1 << (i - 1)) != 0).collect() }
    }

    pub fn mask(&self) -> u16 {
        self.support.iter().fold(0, |m, &i| m | (1 << (i - 1)))
    }

    pub fn complement(&self) -> Self {
        Self::from_mask(!self.mask() & 0xff)
    }

    /// The class `(L - v) / 2` adjoined to `L_{2d}`.
    pub fn glue_class(&self, frame: &Arc<Frame>) -> FrameVector {
        LClasses::new(frame).half_glue(&self.support)
    }
}

/// Admissible glues for one `d`, partitioned into equivalence classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlueClassification {
    pub d: u64,
    pub glues: Vec<GlueVector>,
    /// Indices into `glues`, each class sorted, classes ordered by first member.
    pub classes: Vec<Vec<usize>>,
    /// Every overlattice is even.
    pub overlattices_even: bool,
    /// The Nikulin lattice is primitive in every overlattice.
    pub n_primitive: bool,
}

/// Shared data for glue computations at one `d`.
struct GlueContext {
    d: u64,
    l: IntegerLattice,
    n_part: IntegerLattice,
    classes: LClasses,
}

impl GlueContext {
    fn new(d: u64) -> Result<Self, FamilyError> {
        let l = NsFamily::l(d).make()?;
        let n_part = nikulin_in_frame(l.frame())?;
        let classes = LClasses::new(l.frame());
        Ok(Self { d, l, n_part, classes })
    }

    /// Decides admissibility by building the overlattice and cross-checks the size rule.
    fn admissible(&self, support: &GlueVector) -> Result<Option<IntegerLattice>, FamilyError> {
        let v = self.classes.n_sum(&support.support);
        // v/2 in N means the glue is trivial modulo L (covers S empty and S full).
        if self.n_part.contains(&v.half())? {
            return Ok(None);
        }
        let k = support.support.len() as u64;
        let size_ok = k % 2 == 0 && (2 * self.d) % 8 == (2 * k) % 8;
        let built = overlattice(&self.l, &self.classes.half_glue(&support.support)).ok();
        if built.is_some() != size_ok {
            return Err(FamilyError::CriteriaDisagree { left: support.support.clone(), right: Vec::new() });
        }
        Ok(built)
    }

    fn equivalent(
        &self,
        v: &GlueVector,
        ov: &IntegerLattice,
        w: &GlueVector,
        ow: &IntegerLattice,
    ) -> Result<bool, FamilyError> {
        let (a, b) = (v.support.len(), w.support.len());
        let combinatorial = a == b || a + b == 8;
        let mut targets = Vec::new();
        if a == b {
            targets.push(w.clone());
        }
        if a + b == 8 {
            targets.push(w.complement());
        }
        let mut constructive = false;
        for t in targets {
            let sigma = matching_permutation(v, &t);
            if permute_lattice(ov, &sigma)?.same_points(ow)? {
                constructive = true;
                break;
            }
        }
        if combinatorial != constructive {
            return Err(FamilyError::CriteriaDisagree { left: v.support.clone(), right: w.support.clone() });
        }
        Ok(combinatorial)
    }
}

/// Decides admissibility of one support by building the overlattice.
pub fn glue_admissible(d: u64, support: &GlueVector) -> Result<bool, FamilyError> {
    Ok(GlueContext::new(d)?.admissible(support)?.is_some())
}

/// The Nikulin lattice spanned by `N1..N7` and `Nhat` inside an `L` frame.
pub fn nikulin_in_frame(frame: &Arc<Frame>) -> Result<IntegerLattice, FamilyError> {
    let mut rows: Vec<Vec<Rat>> = (1..8).map(|i| unit_row(9, i)).collect();
    let mut nhat = vec![half(); 9];
    nhat[0] = Rat::zero();
    rows.push(nhat);
    Ok(IntegerLattice::in_frame("N", frame, RatMatrix::from_rows(rows).expect("rect"), Vec::new())?)
}

/// Admissible glues over a subset of the 256 supports (workers can split the mask range).
pub fn admissible_glues_in(d: u64, masks: core::ops::Range<u16>) -> Result<Vec<GlueVector>, FamilyError> {
    let ctx = GlueContext::new(d)?;
    Ok(scan_glues(&ctx, masks)?.into_iter().map(|(g, _)| g).collect())
}

fn scan_glues(ctx: &GlueContext, masks: core::ops::Range<u16>) -> Result<Vec<(GlueVector, IntegerLattice)>, FamilyError> {
    let mut out = Vec::new();
    for mask in masks {
        let g = GlueVector::from_mask(mask);
        if let Some(o) = ctx.admissible(&g)? {
            out.push((g, o));
        }
    }
    Ok(out)
}

/// Brute force over all 2^8 supports, then fusion into equivalence classes.
pub fn admissible_glues(d: u64) -> Result<GlueClassification, FamilyError> {
    let ctx = GlueContext::new(d)?;
    let mut found = scan_glues(&ctx, 0..256)?;
    found.sort_by(|a, b| a.0.cmp(&b.0));
    let (glues, lattices) = found.into_iter().unzip();
    fuse(&ctx, glues, lattices)
}

/// Canonical ordering plus union-find over `glue_equivalent`.
pub fn classify_glues(d: u64, mut glues: Vec<GlueVector>) -> Result<GlueClassification, FamilyError> {
    glues.sort();
    glues.dedup();
    let ctx = GlueContext::new(d)?;
    let mut lattices = Vec::with_capacity(glues.len());
    for g in &glues {
        lattices.push(ctx.admissible(g)?.ok_or_else(|| FamilyError::Inadmissible { d, support: g.support.clone() })?);
    }
    fuse(&ctx, glues, lattices)
}

fn fuse(ctx: &GlueContext, glues: Vec<GlueVector>, lattices: Vec<IntegerLattice>) -> Result<GlueClassification, FamilyError> {
    let d = ctx.d;
    let n = glues.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if find(&mut parent, i) == find(&mut parent, j) {
                continue;
            }
            if ctx.equivalent(&glues[i], &lattices[i], &glues[j], &lattices[j])? {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match classes.iter_mut().find(|c| find(&mut parent, c[0]) == r) {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    let nikulin = nikulin_in_frame(ctx.l.frame())?;
    let overlattices_even = lattices.iter().all(IntegerLattice::is_even);
    let mut n_primitive = true;
    for o in &lattices {
        n_primitive &= crate::lattice::is_primitive(o, &nikulin)?;
    }
    Ok(GlueClassification { d, glues, classes, overlattices_even, n_primitive })
}

fn permute_lattice(l: &IntegerLattice, sigma: &[usize; 8]) -> Result<IntegerLattice, FamilyError> {
    // sigma[i-1] = image index of N_i
    let b = l.basis_matrix();
    let mut rows = Vec::with_capacity(b.rows());
    for r in 0..b.rows() {
        let row = b.row(r);
        let mut out = vec![Rat::zero(); 9];
        out[0] = row[0].clone();
        for i in 1..=8 {
            out[sigma[i - 1]] = row[i].clone();
        }
        rows.push(out);
    }
    Ok(IntegerLattice::in_frame(l.name(), l.frame(), RatMatrix::from_rows(rows).expect("rect"), Vec::new())?)
}

/// Permutation sending `from` onto `to` (order preserving), and the
/// complement of `from` onto the complement of `to`.
fn matching_permutation(from: &GlueVector, to: &GlueVector) -> [usize; 8] {
    let mut sigma = [0usize; 8];
    let (fc, tc) = (from.complement(), to.complement());
    for (a, b) in from.support.iter().zip(&to.support).chain(fc.support.iter().zip(&tc.support)) {
        sigma[a - 1] = *b;
    }
    sigma
}

/// Equivalence of two admissible glues: same support size (a permutation in
/// Σ8) or complementary sizes (the identity `v'/2 = Nhat - v/2` after a
/// permutation). The constructive check applies the permutation to the
/// overlattice and compares point sets; both verdicts must agree.
pub fn glue_equivalent(d: u64, v: &GlueVector, w: &GlueVector) -> Result<bool, FamilyError> {
    let ctx = GlueContext::new(d)?;
    let ov = ctx.admissible(v)?.ok_or_else(|| FamilyError::Inadmissible { d, support: v.support.clone() })?;
    let ow = ctx.admissible(w)?.ok_or_else(|| FamilyError::Inadmissible { d, support: w.support.clone() })?;
    ctx.equivalent(v, &ov, w, &ow)
}

/// The index-2 overlattice generated by `l` and `glue`.
pub fn overlattice(l: &IntegerLattice, glue: &FrameVector) -> Result<IntegerLattice, FamilyError> {
    if l.contains(glue)? {
        return Err(FamilyError::GlueInLattice);
    }
    if !l.contains(&glue.scale_int(2))? {
        return Err(FamilyError::NotIndexTwo);
    }
    for (index, b) in l.basis_vectors().iter().enumerate() {
        let value = inner(glue, b)?;
        if !value.is_integer() {
            return Err(FamilyError::Integrality { index, value });
        }
    }
    let square = inner(glue, glue)?;
    let two = Rat::from_integer(Int::from(2));
    if !(&square / &two).is_integer() {
        return Err(FamilyError::Evenness { square });
    }
    let mut gens = l.basis_vectors();
    gens.push(glue.clone());
    Ok(IntegerLattice::from_generators(format!("{}+glue", l.name()), l.frame(), &gens)?)
}

/// Explicit vectors of the primitive embedding of `M'_{4n}` into the K3 lattice.
#[derive(Debug, Clone)]
pub struct K3Embedding {
    pub n: u64,
    pub u: FrameVector,
    pub alpha: FrameVector,
    pub m: FrameVector,
    pub v: FrameVector,
    pub half_sum: FrameVector,
    pub m_square: Int,
    /// `span{M, E8(-2), (M+v)/2}` inside the K3 frame.
    pub ns_copy: IntegerLattice,
    pub primitive: bool,
    /// The images of the normative basis of `M'_{4n}` reproduce its Gram matrix.
    pub isometric_to_family: bool,
}

fn k3_vec(frame: &Arc<Frame>, entries: &[(usize, i64)]) -> FrameVector {
    let mut num = vec![Int::zero(); 22];
    for &(i, x) in entries {
        num[i] += Int::from(x);
    }
    FrameVector::new(frame, num, Int::one()).expect("22 coordinates")
}

/// Anti-diagonal `E8(-2) = {(0, x, -x)}` inside the K3 lattice.
pub fn antidiagonal_e8(k3: &IntegerLattice) -> Result<IntegerLattice, FamilyError> {
    let f = k3.frame();
    let gens: Vec<FrameVector> = (0..8).map(|j| k3_vec(f, &[(6 + j, 1), (14 + j, -1)])).collect();
    let basis = RatMatrix::from_rows(gens.iter().map(FrameVector::coords).collect()).expect("rect");
    Ok(IntegerLattice::in_frame("E8(-2) antidiagonal", f, basis, names("E", 1..=8))?)
}

pub fn k3_embedding(family: NsFamily) -> Result<K3Embedding, FamilyError> {
    if family.kind != FamilyKind::MPrime {
        return Err(FamilyError::NoEmbedding(family));
    }
    family.validate()?;
    // M^2 = 2d' = 4n
    let n = family.param / 2;
    let k3 = k3_lattice();
    let f = k3.frame().clone();
    let k = n / 2 + 1;
    let k = i64::try_from(k).map_err(|_| FamilyError::NonPositive)?;
    let u = k3_vec(&f, &[(0, 1), (1, k)]);
    // alpha = -eps1 (square -2) or -(eps1 + eps3) (square -4) in the first E8(-1)
    let alpha_entries: Vec<(usize, i64)> = if n % 2 == 1 { vec![(6, -1)] } else { vec![(6, -1), (8, -1)] };
    let alpha = k3_vec(&f, &alpha_entries);
    let alpha2: Vec<(usize, i64)> = alpha_entries.iter().map(|&(i, x)| (i + 8, x)).collect();
    let alpha_second = k3_vec(&f, &alpha2);
    let m = u.scale_int(2).add(&alpha)?.add(&alpha_second)?;
    let v = alpha.sub(&alpha_second)?;
    let half_sum = m.add(&v)?.half();
    let m_square = lattice::inner_int(&m, &m)?;

    let e8 = antidiagonal_e8(&k3)?;
    let mut gens = vec![m.clone()];
    gens.extend(e8.basis_vectors());
    gens.push(half_sum.clone());
    let ns_copy = IntegerLattice::from_generators(format!("NS copy of {family}"), &f, &gens)?;
    let primitive = lattice::is_primitive(&k3, &ns_copy)?;

    let target = family.make()?;
    let mut images = vec![half_sum.clone()];
    images.extend(e8.basis_vectors());
    let isometric_to_family = lattice::generators_map_onto(target.gram(), &ns_copy, &images)?;

    Ok(K3Embedding { n, u, alpha, m, v, half_sum, m_square, ns_copy, primitive, isometric_to_family })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin;

    #[test]
    fn e8_unimodular() {
        assert_eq!(exactlin::det(&e8_cartan()).unwrap(), Int::one());
        let c = e8_cartan();
        assert!(c[(0, 2)].is_zero());
    }

    #[test]
    fn nikulin_basics() {
        let n = nikulin();
        assert_eq!(n.det(), Int::from(64));
        let nhat = n.named("Nhat").unwrap();
        assert_eq!(inner(&nhat, &nhat).unwrap(), Rat::from_integer(Int::from(-4)));
        let n3 = FrameVector::unit(n.frame(), 2);
        assert_eq!(inner(&nhat, &n3).unwrap(), Rat::from_integer(Int::from(-1)));
        assert!(!n.contains(&nhat.half()).unwrap());
    }

    #[test]
    fn family_strings_roundtrip() {
        for s in ["L:2d=8", "L':2d=8", "M:2d'=4", "M':2d'=8"] {
            assert_eq!(s.parse::<NsFamily>().unwrap().to_string(), s);
        }
        assert!("L:2d'=8".parse::<NsFamily>().is_err());
        assert!("L:2d=7".parse::<NsFamily>().is_err());
        assert!("Q:2d=8".parse::<NsFamily>().is_err());
    }

    #[test]
    fn make_errors() {
        assert!(matches!(NsFamily::l_prime(3).make(), Err(FamilyError::OddPrimeL { .. })));
        assert!(matches!(NsFamily::m_prime(3).make(), Err(FamilyError::OddPrimeM { .. })));
        assert!(matches!(NsFamily::l(0).make(), Err(FamilyError::NonPositive)));
    }

    #[test]
    fn l4_overlattice_is_l_prime_4() {
        let l4 = NsFamily::l(2).make().unwrap();
        let c = LClasses::new(l4.frame());
        let ov = overlattice(&l4, &c.half_glue(&[1, 2])).unwrap();
        let lp = NsFamily::l_prime(2).make().unwrap();
        assert!(ov.same_points(&lp).unwrap());
        assert_eq!(num_traits::Signed::abs(&lp.det()), Int::from(64));
    }

    #[test]
    fn l6_pair_glue_is_odd() {
        let l6 = NsFamily::l(3).make().unwrap();
        let c = LClasses::new(l6.frame());
        assert!(matches!(overlattice(&l6, &c.half_glue(&[1, 2])), Err(FamilyError::Evenness { .. })));
        assert!(matches!(overlattice(&l6, &c.l), Err(FamilyError::GlueInLattice)));
    }

    #[test]
    fn correspondence_examples() {
        assert_eq!(NsFamily::l(1).correspondence(), NsFamily::m_prime(2));
        assert_eq!(NsFamily::m(4).correspondence(), NsFamily::l_prime(8));
        assert_eq!(NsFamily::l_prime(2).correspondence(), NsFamily::m(1));
    }
}
