//! Root obstructions, positivity certificates and numeric linear-system data
//! for the rank-9 `L` families.
//!
//! Candidate irreducible curves are modelled as `C = aL + sum b_i N_i` with
//! `C^2 = -2`, `a > 0`, `b_i <= 0`, plus the `N_i` themselves. In numerators
//! over the lattice's coordinate denominator `δ` (so `a = x_0/δ`,
//! `b_i = x_i/δ`) the root condition reads `sum x_i^2 = d x_0^2 + δ^2`.
//!
//! Bounds on `a` come from Cauchy–Schwarz in the negative-definite span of
//! the `N_i`. Write `D = pL + m`, `C = aL + n`. Then `D·C <= 0` forces
//! `2dpa <= |n·m| <= sqrt(n^2 m^2)` and with `-n^2 = 2da^2 + 2` this gives
//! `a^2 <= (-m^2) / (d D^2)` whenever `D^2 > 0`. For `D^2 = 0` write
//! `C = (a/p) D + r` with `r` in the `N` span; `r^2 < 0` and `D·C = -k < 0`
//! give `a < p / k <= p`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactlin::{self, Int, Rat};
use crate::lattice::{inner, inner_int, FrameVector, IntegerLattice, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PositivityError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("unsupported lattice for root search: {0}")]
    UnknownFamily(&'static str),
    #[error("divisor is not in the lattice")]
    NotInLattice,
    #[error("divisor has negative square {0}")]
    NegativeSquare(Int),
    #[error("divisor has non-positive L-coefficient; only classes in the positive cone are classified")]
    NotPositiveCone,
    #[error("divisor is not nef: {witness:?} meets it negatively")]
    NotNef { witness: FrameVector },
    #[error("divisor has a fixed component: D = {a}E + Γ")]
    FixedComponent { a: Int },
    #[error("divisor is neither ample nor pseudo-ample")]
    NotPseudoAmple,
    #[error("coefficients too large for the root search")]
    Overflow,
    #[error("octet must have 8 classes, got {0}")]
    OctetSize(usize),
    #[error("octet class {index} has square {square}, not -2")]
    NotRoot { index: usize, square: Rat },
    #[error("octet classes {i} and {j} are not orthogonal (product {product})")]
    NotOrthogonal { i: usize, j: usize, product: Rat },
    #[error("odd self-intersection {0}: class is not in an even lattice")]
    OddSquare(Int),
}

/// Modelling assumption attached to every report.
pub const EFFECTIVITY_ASSUMPTION: &str =
    "irreducible curves are N_1..N_8 or classes aL + sum b_i N_i with a > 0 and b_i <= 0";

/// The candidate-curve model for one lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootConstraintProfile {
    pub d: u64,
    /// Every lattice vector has frame coordinates in `(1/denominator) Z`.
    pub denominator: u64,
    /// The `N_i` (by index `1..=8`) that lie in the lattice.
    pub exceptional: Vec<usize>,
}

/// Exact membership test on numerator vectors, precomputed from the inverse basis.
#[derive(Debug, Clone)]
struct Membership {
    k: Vec<[i128; 9]>,
    modulus: i128,
}

impl Membership {
    fn contains(&self, x: &[i64; 9]) -> bool {
        (0..9).all(|j| {
            let s: i128 = (0..9).map(|i| i128::from(x[i]) * self.k[i][j]).sum();
            s % self.modulus == 0
        })
    }
}

/// Precomputed data for searches inside one rank-9 `L`-frame lattice.
#[derive(Debug, Clone)]
pub struct SearchContext {
    ns: IntegerLattice,
    d: i64,
    delta: i64,
    member: Membership,
    profile: RootConstraintProfile,
}

/// A divisor in numerator form: `D = y / den`.
#[derive(Debug, Clone)]
struct Numer {
    y: [i64; 9],
    den: i64,
}

/// What a scan is looking for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanTarget {
    /// Roots with `D·C <= 0` (or `< 0` when `strict`).
    Roots { strict: bool },
    /// Isotropic nef-profile classes `E` with `E·D = k`.
    Isotropic { k: i64 },
}

/// Search parameters for one divisor; the numerator range `1..=x0_max` is
/// complete for the target.
#[derive(Debug, Clone)]
pub struct SearchPlan {
    divisor: Numer,
    pub target: ScanTarget,
    pub x0_max: i64,
    pub d2: Int,
}

impl SearchPlan {
    /// Largest admissible `a`, as a rational.
    pub fn a_max(&self, ctx: &SearchContext) -> Rat {
        Rat::new(Int::from(self.x0_max), Int::from(ctx.delta))
    }
}

/// One candidate found by a scan: numerators over the context denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hit {
    pub x: [i64; 9],
    /// Sign of `D·C` (roots) or zero (isotropic matches).
    pub sign: Ordering,
}

fn to_i64(x: &Int) -> Result<i64, PositivityError> {
    x.to_i64().ok_or(PositivityError::Overflow)
}

impl SearchContext {
    pub fn new(ns: &IntegerLattice) -> Result<Self, PositivityError> {
        let f = ns.frame();
        let g = f.gram();
        if f.dim() != 9 || ns.rank() != 9 {
            return Err(PositivityError::UnknownFamily("root search needs a rank-9 lattice in an (L, N1..N8) frame"));
        }
        for i in 0..9 {
            for j in 0..9 {
                let want_zero = i != j;
                if want_zero && !g[(i, j)].is_zero() {
                    return Err(PositivityError::UnknownFamily("frame form is not diagonal"));
                }
            }
        }
        let two = Int::from(2);
        if !(1..9).all(|i| g[(i, i)] == -two.clone()) || !g[(0, 0)].is_positive() || g[(0, 0)].is_odd() {
            return Err(PositivityError::UnknownFamily("frame form is not diag(2d, -2, ..., -2)"));
        }
        let d = to_i64(&(&g[(0, 0)] / &two))?;
        let basis = ns.basis_matrix();
        let delta = to_i64(&exactlin::common_denominator(basis.iter()))?;
        let inv = basis.inverse().map_err(LatticeError::from)?;
        let kappa = exactlin::common_denominator(inv.iter());
        let mut k = vec![[0i128; 9]; 9];
        for (i, row) in k.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                let v = (&inv[(i, j)] * Rat::from_integer(kappa.clone())).to_integer();
                *slot = v.to_i128().ok_or(PositivityError::Overflow)?;
            }
        }
        let modulus = i128::from(delta) * kappa.to_i128().ok_or(PositivityError::Overflow)?;
        let member = Membership { k, modulus };
        let mut ctx = Self {
            ns: ns.clone(),
            d,
            delta,
            member,
            profile: RootConstraintProfile { d: d as u64, denominator: delta as u64, exceptional: Vec::new() },
        };
        ctx.profile.exceptional = (1..=8)
            .filter(|&i| {
                let mut x = [0i64; 9];
                x[i] = delta;
                ctx.member.contains(&x)
            })
            .collect();
        Ok(ctx)
    }

    pub fn lattice(&self) -> &IntegerLattice {
        &self.ns
    }

    pub fn profile(&self) -> &RootConstraintProfile {
        &self.profile
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    /// Membership of a numerator vector (over the context denominator).
    pub fn contains_numerators(&self, x: &[i64; 9]) -> bool {
        self.member.contains(x)
    }

    pub fn to_vector(&self, x: &[i64; 9]) -> FrameVector {
        FrameVector::new(self.ns.frame(), x.iter().map(|&v| Int::from(v)).collect(), Int::from(self.delta))
            .expect("frame has 9 coordinates")
    }

    fn numer(&self, v: &FrameVector) -> Result<Numer, PositivityError> {
        let v = v.rehome(self.ns.frame())?;
        let mut y = [0i64; 9];
        for (slot, n) in y.iter_mut().zip(v.numerators()) {
            *slot = to_i64(n)?;
        }
        Ok(Numer { y, den: to_i64(v.denominator())? })
    }

    /// `d y0 x0 - sum y_i x_i`, a positive multiple of `D·C`.
    fn pairing_sign(&self, dv: &Numer, x: &[i64; 9]) -> i128 {
        let mut s = i128::from(self.d) * i128::from(dv.y[0]) * i128::from(x[0]);
        for i in 1..9 {
            s -= i128::from(dv.y[i]) * i128::from(x[i]);
        }
        s
    }

    fn checked_divisor(&self, dvec: &FrameVector) -> Result<(Numer, Int), PositivityError> {
        if !self.ns.contains(dvec)? {
            return Err(PositivityError::NotInLattice);
        }
        let d2 = inner_int(dvec, dvec)?;
        if d2.is_negative() {
            return Err(PositivityError::NegativeSquare(d2));
        }
        let dv = self.numer(dvec)?;
        if dv.y[0] <= 0 {
            return Err(PositivityError::NotPositiveCone);
        }
        Ok((dv, d2))
    }

    /// Plan for roots with `D·C <= 0` (`D^2 > 0`) or `D·C < 0` (`D^2 = 0`).
    pub fn root_plan(&self, dvec: &FrameVector) -> Result<SearchPlan, PositivityError> {
        let (dv, d2) = self.checked_divisor(dvec)?;
        let d = i128::from(self.d);
        let delta = i128::from(self.delta);
        let y0 = i128::from(dv.y[0]);
        let q: i128 = dv.y[1..].iter().map(|&v| i128::from(v) * i128::from(v)).sum();
        let (target, x0_max) = if d2.is_zero() {
            // a < p  <=>  x0 * den < y0 * delta
            let bound = (y0 * delta - 1) / i128::from(dv.den);
            (ScanTarget::Roots { strict: true }, bound)
        } else {
            // x0^2 d (d y0^2 - q) <= delta^2 q
            let c = d * (d * y0 * y0 - q);
            let rhs = delta * delta * q;
            let mut x0 = 0i128;
            while (x0 + 1) * (x0 + 1) * c <= rhs {
                x0 += 1;
            }
            (ScanTarget::Roots { strict: false }, x0)
        };
        let x0_max = i64::try_from(x0_max).map_err(|_| PositivityError::Overflow)?;
        Ok(SearchPlan { divisor: dv, target, x0_max, d2 })
    }

    /// Plan for isotropic classes `E` with `E·D = k`; requires `D^2 > 0`.
    pub fn isotropic_plan(&self, dvec: &FrameVector, k: i64) -> Result<SearchPlan, PositivityError> {
        let (dv, d2) = self.checked_divisor(dvec)?;
        if d2.is_zero() {
            return Err(PositivityError::UnknownFamily("isotropic search needs D^2 > 0"));
        }
        let d = i128::from(self.d);
        let y0 = i128::from(dv.y[0]);
        let q: i128 = dv.y[1..].iter().map(|&v| i128::from(v) * i128::from(v)).sum();
        let kk = i128::from(k) * i128::from(self.delta) * i128::from(dv.den);
        // f(x0) = (2 d y0 x0 - k δ den)^2 - 4 d q x0^2 <= 0 on a bounded interval
        let f = |x0: i128| {
            let t = 2 * d * y0 * x0 - kk;
            t * t - 4 * d * q * x0 * x0
        };
        let mut x0 = 1i128;
        let mut last_ok = 0i128;
        loop {
            let fx = f(x0);
            if fx <= 0 {
                last_ok = x0;
            } else if f(x0 + 1) > fx && 2 * d * y0 * x0 > kk {
                break;
            }
            x0 += 1;
            if x0 > 1 << 20 {
                return Err(PositivityError::Overflow);
            }
        }
        let x0_max = i64::try_from(last_ok).map_err(|_| PositivityError::Overflow)?;
        Ok(SearchPlan { divisor: dv, target: ScanTarget::Isotropic { k }, x0_max, d2 })
    }

    /// Scans `a`-numerators in `range` (clipped to the plan). Output is sorted.
    pub fn scan(&self, plan: &SearchPlan, range: core::ops::RangeInclusive<i64>) -> Vec<Hit> {
        let lo = (*range.start()).max(1);
        let hi = (*range.end()).min(plan.x0_max);
        let mut hits = Vec::new();
        let delta2 = i128::from(self.delta) * i128::from(self.delta);
        for x0 in lo..=hi {
            let base = i128::from(self.d) * i128::from(x0) * i128::from(x0);
            let total = match plan.target {
                ScanTarget::Roots { .. } => base + delta2,
                ScanTarget::Isotropic { .. } => base,
            };
            let Ok(total) = i64::try_from(total) else { continue };
            for_each_signed_arrangement(total, |tail| {
                let mut x = [0i64; 9];
                x[0] = x0;
                x[1..].copy_from_slice(tail);
                if !self.member.contains(&x) {
                    return;
                }
                let s = self.pairing_sign(&plan.divisor, &x);
                let keep = match plan.target {
                    ScanTarget::Roots { strict: false } => s <= 0,
                    ScanTarget::Roots { strict: true } => s < 0,
                    ScanTarget::Isotropic { k } => {
                        2 * s == i128::from(k) * i128::from(self.delta) * i128::from(plan.divisor.den)
                    }
                };
                if keep {
                    hits.push(Hit { x, sign: s.cmp(&0) });
                }
            });
        }
        hits.sort();
        hits
    }

    /// `D·N_i` for each exceptional `N_i`.
    pub fn exceptional_pairings(&self, dvec: &FrameVector) -> Result<Vec<(usize, Int)>, PositivityError> {
        let mut out = Vec::new();
        for &i in &self.profile.exceptional {
            let mut x = [0i64; 9];
            x[i] = self.delta;
            out.push((i, inner_int(dvec, &self.to_vector(&x))?));
        }
        Ok(out)
    }
}

/// Calls `f` on every `x in Z_{<=0}^8` with `sum x_i^2 = total`: first the
/// non-increasing magnitude patterns, then their distinct arrangements.
fn for_each_signed_arrangement(total: i64, mut f: impl FnMut(&[i64])) {
    let mut pattern = [0i64; 8];
    patterns(total, 0, isqrt(total), &mut pattern, &mut |p| {
        let mut perm = *p;
        perm.sort_unstable();
        // ascending order of magnitudes; walk distinct permutations
        loop {
            let neg: [i64; 8] = core::array::from_fn(|i| -perm[i]);
            f(&neg);
            if !next_permutation(&mut perm) {
                break;
            }
        }
    });
}

fn patterns(remaining: i64, pos: usize, cap: i64, cur: &mut [i64; 8], f: &mut impl FnMut(&[i64; 8])) {
    if pos == 8 {
        if remaining == 0 {
            f(cur);
        }
        return;
    }
    let slots = (8 - pos) as i64;
    let mut m = cap.min(isqrt(remaining));
    while m >= 0 {
        if m * m * slots < remaining {
            break;
        }
        cur[pos] = m;
        patterns(remaining - m * m, pos + 1, m, cur, f);
        m -= 1;
    }
    cur[pos] = 0;
}

fn isqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    num_integer::Roots::sqrt(&n)
}

fn next_permutation(v: &mut [i64; 8]) -> bool {
    let Some(i) = (0..7).rev().find(|&i| v[i] < v[i + 1]) else { return false };
    let j = (i + 1..8).rev().find(|&j| v[j] > v[i]).expect("exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// Roots found plus the data certifying completeness.
#[derive(Debug, Clone)]
pub struct RootSearch {
    pub roots: Vec<FrameVector>,
    pub hits: Vec<Hit>,
    pub exceptional: Vec<(usize, Int)>,
    pub a_max: Rat,
    pub exhaustive: bool,
    pub d2: Int,
}

pub fn enumerate_obstructing_roots(ns: &IntegerLattice, dvec: &FrameVector) -> Result<RootSearch, PositivityError> {
    let ctx = SearchContext::new(ns)?;
    let plan = ctx.root_plan(dvec)?;
    let hits = ctx.scan(&plan, 1..=plan.x0_max);
    search_from_hits(&ctx, &plan, dvec, hits)
}

/// Assembles a [`RootSearch`] from hits (possibly gathered by several workers).
pub fn search_from_hits(
    ctx: &SearchContext,
    plan: &SearchPlan,
    dvec: &FrameVector,
    mut hits: Vec<Hit>,
) -> Result<RootSearch, PositivityError> {
    hits.sort();
    hits.dedup();
    Ok(RootSearch {
        roots: hits.iter().map(|h| ctx.to_vector(&h.x)).collect(),
        hits,
        exceptional: ctx.exceptional_pairings(dvec)?,
        a_max: plan.a_max(ctx),
        exhaustive: true,
        d2: plan.d2.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PositivityStatus {
    Ample,
    PseudoAmple,
    Nef,
    NotNef,
}

impl PositivityStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Ample => "ample",
            Self::PseudoAmple => "pseudo_ample",
            Self::Nef => "nef",
            Self::NotNef => "not_nef",
        }
    }

    /// Big and nef: ample classes qualify too.
    pub fn is_big_and_nef(self) -> bool {
        matches!(self, Self::Ample | Self::PseudoAmple)
    }
}

#[derive(Debug, Clone)]
pub struct PositivityReport {
    pub divisor: FrameVector,
    pub self_intersection: Int,
    pub status: PositivityStatus,
    pub witness: Option<FrameVector>,
    pub search_bound: Rat,
    pub exhaustive: bool,
    pub assumptions: Vec<String>,
}

pub fn classify_positivity(ns: &IntegerLattice, dvec: &FrameVector) -> Result<PositivityReport, PositivityError> {
    let search = enumerate_obstructing_roots(ns, dvec)?;
    let ctx = SearchContext::new(ns)?;
    classify_from_search(&ctx, dvec, &search)
}

pub fn classify_from_search(
    ctx: &SearchContext,
    dvec: &FrameVector,
    search: &RootSearch,
) -> Result<PositivityReport, PositivityError> {
    // (numerators, sign) for every candidate, then lexicographic choice
    let mut cands: Vec<([i64; 9], Ordering)> = search.hits.iter().map(|h| (h.x, h.sign)).collect();
    for (i, v) in &search.exceptional {
        let mut x = [0i64; 9];
        x[*i] = ctx.delta;
        cands.push((x, v.cmp(&Int::zero())));
    }
    cands.sort();
    let first = |o: Ordering| cands.iter().find(|c| c.1 == o).map(|c| ctx.to_vector(&c.0));
    let negative = first(Ordering::Less);
    let zero = first(Ordering::Equal);
    let (status, witness) = if let Some(w) = negative {
        (PositivityStatus::NotNef, Some(w))
    } else if search.d2.is_zero() {
        (PositivityStatus::Nef, zero)
    } else if let Some(w) = zero {
        (PositivityStatus::PseudoAmple, Some(w))
    } else {
        (PositivityStatus::Ample, None)
    };
    Ok(PositivityReport {
        divisor: dvec.clone(),
        self_intersection: search.d2.clone(),
        status,
        witness,
        search_bound: search.a_max.clone(),
        exhaustive: search.exhaustive,
        assumptions: vec![String::from(EFFECTIVITY_ASSUMPTION)],
    })
}

/// Whether half the sum of an octet of disjoint roots lies in `ns`.
pub fn is_even_set(ns: &IntegerLattice, octet: &[FrameVector]) -> Result<bool, PositivityError> {
    if octet.len() != 8 {
        return Err(PositivityError::OctetSize(octet.len()));
    }
    let minus_two = Rat::from_integer(Int::from(-2));
    for (index, c) in octet.iter().enumerate() {
        if !ns.contains(c)? {
            return Err(PositivityError::NotInLattice);
        }
        let square = inner(c, c)?;
        if square != minus_two {
            return Err(PositivityError::NotRoot { index, square });
        }
    }
    for i in 0..8 {
        for j in i + 1..8 {
            let product = inner(&octet[i], &octet[j])?;
            if !product.is_zero() {
                return Err(PositivityError::NotOrthogonal { i, j, product });
            }
        }
    }
    let sum = octet.iter().skip(1).try_fold(octet[0].clone(), |acc, c| acc.add(c))?;
    Ok(ns.contains(&sum.half())?)
}

/// Decompositions of a nef divisor into a pencil plus curves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PencilDecomposition {
    /// `D^2 = 0`: `D = kE` with `k` maximal.
    Multiple { k: Int, e: FrameVector },
    /// `D = aE + Γ` with `E^2 = 0`, `Γ^2 = -2`, `E·Γ = 1`.
    FixedComponent { a: Int, e: FrameVector, gamma: FrameVector },
    /// `D = 2E + Γ0 + Γ1` with `E·Γ0 = E·Γ1 = 1`, `Γ0·Γ1 = 0`.
    Cone { e: FrameVector, gamma0: FrameVector, gamma1: FrameVector },
}

/// Largest `k` with `D/k` in `ns`.
pub fn divisibility(ns: &IntegerLattice, dvec: &FrameVector) -> Result<Int, PositivityError> {
    let c = ns.coordinates(dvec)?.ok_or(PositivityError::NotInLattice)?;
    Ok(c.iter().fold(Int::zero(), |g, x| g.gcd(x)))
}

fn is_curve_class(ctx: &SearchContext, v: &FrameVector) -> Result<bool, PositivityError> {
    let n = ctx.numer(v)?;
    if n.den != 1 && ctx.delta % n.den != 0 {
        return Ok(false);
    }
    let scale = ctx.delta / n.den;
    let x: [i64; 9] = core::array::from_fn(|i| n.y[i] * scale);
    if !ctx.member.contains(&x) {
        return Ok(false);
    }
    if x[0] == 0 {
        return Ok(ctx.profile.exceptional.iter().any(|&i| (1..9).all(|j| x[j] == if j == i { ctx.delta } else { 0 })));
    }
    Ok(x[0] > 0 && x[1..].iter().all(|&b| b <= 0))
}

/// Nef isotropic classes with `E·D = k`, sorted.
pub fn isotropic_classes(ns: &IntegerLattice, dvec: &FrameVector, k: i64) -> Result<Vec<FrameVector>, PositivityError> {
    let ctx = SearchContext::new(ns)?;
    let plan = ctx.isotropic_plan(dvec, k)?;
    let mut out = Vec::new();
    for h in ctx.scan(&plan, 1..=plan.x0_max) {
        let e = ctx.to_vector(&h.x);
        if classify_positivity(ns, &e)?.status == PositivityStatus::Nef {
            out.push(e);
        }
    }
    Ok(out)
}

pub fn pencil_decomposition(ns: &IntegerLattice, dvec: &FrameVector) -> Result<Option<PencilDecomposition>, PositivityError> {
    let report = classify_positivity(ns, dvec)?;
    if report.status == PositivityStatus::NotNef {
        return Err(PositivityError::NotNef { witness: report.witness.expect("not_nef carries a witness") });
    }
    if report.self_intersection.is_zero() {
        let k = divisibility(ns, dvec)?;
        let e = dvec.scale(&Rat::new(Int::one(), k.clone()));
        return Ok(Some(PencilDecomposition::Multiple { k, e }));
    }
    let ctx = SearchContext::new(ns)?;
    let a = &report.self_intersection / Int::from(2) + Int::one();
    for e in isotropic_classes(ns, dvec, 1)? {
        let gamma = dvec.sub(&e.scale(&Rat::from_integer(a.clone())))?;
        if is_curve_class(&ctx, &gamma)? {
            return Ok(Some(PencilDecomposition::FixedComponent { a, e, gamma }));
        }
    }
    if report.self_intersection == Int::from(4) {
        let search = enumerate_obstructing_roots(ns, dvec)?;
        let mut zero_roots: Vec<FrameVector> =
            search.hits.iter().filter(|h| h.sign == Ordering::Equal).map(|h| ctx.to_vector(&h.x)).collect();
        for (i, v) in &search.exceptional {
            if v.is_zero() {
                let mut x = [0i64; 9];
                x[*i] = ctx.delta;
                zero_roots.push(ctx.to_vector(&x));
            }
        }
        for e in isotropic_classes(ns, dvec, 2)? {
            let rest = dvec.sub(&e.scale_int(2))?;
            for g0 in &zero_roots {
                if inner(&e, g0)? != Rat::one() {
                    continue;
                }
                let g1 = rest.sub(g0)?;
                if g1 > *g0 && zero_roots.contains(&g1) && inner(&e, &g1)? == Rat::one() && inner(g0, &g1)?.is_zero() {
                    return Ok(Some(PencilDecomposition::Cone { e, gamma0: g0.clone(), gamma1: g1 }));
                }
            }
        }
    }
    Ok(None)
}

impl PartialOrd for FrameVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.frame() != other.frame() {
            return None;
        }
        Some(self.coords().cmp(&other.coords()))
    }
}

/// Why a polarization is hyperelliptic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HyperellipticWitness {
    /// `D^2 = 2`.
    Genus2,
    /// An elliptic class `E` with `E·D = 2`.
    Elliptic(FrameVector),
    /// `D = 2B` with `B^2 = 2`.
    Half(FrameVector),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HyperellipticVerdict {
    DoubleCover(HyperellipticWitness),
    Birational,
}

pub fn hyperelliptic_test(ns: &IntegerLattice, dvec: &FrameVector) -> Result<HyperellipticVerdict, PositivityError> {
    let report = classify_positivity(ns, dvec)?;
    if !report.status.is_big_and_nef() {
        return Err(PositivityError::NotPseudoAmple);
    }
    if let Some(PencilDecomposition::FixedComponent { a, .. }) = pencil_decomposition(ns, dvec)? {
        return Err(PositivityError::FixedComponent { a });
    }
    if report.self_intersection == Int::from(2) {
        return Ok(HyperellipticVerdict::DoubleCover(HyperellipticWitness::Genus2));
    }
    if let Some(e) = isotropic_classes(ns, dvec, 2)?.into_iter().next() {
        return Ok(HyperellipticVerdict::DoubleCover(HyperellipticWitness::Elliptic(e)));
    }
    let b = dvec.half();
    if ns.contains(&b)? && inner(&b, &b)? == Rat::from_integer(Int::from(2)) {
        return Ok(HyperellipticVerdict::DoubleCover(HyperellipticWitness::Half(b)));
    }
    Ok(HyperellipticVerdict::Birational)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RrAssumption {
    /// Valid for nef and big divisors without fixed part.
    NefBigNoFixedPart,
    /// `D = kE` with `|E|` a free elliptic pencil, so `h^0 = k + 1`.
    FreeEllipticPencil,
}

impl RrAssumption {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::NefBigNoFixedPart => "valid under nef+big with no fixed part",
            Self::FreeEllipticPencil => "free elliptic pencil assumption",
        }
    }
}

/// `h^0(D)` from Riemann–Roch on a K3 surface.
pub fn riemann_roch_h0(ns: &IntegerLattice, dvec: &FrameVector) -> Result<(Int, RrAssumption), PositivityError> {
    if !ns.contains(dvec)? {
        return Err(PositivityError::NotInLattice);
    }
    let d2 = inner_int(dvec, dvec)?;
    if d2.is_negative() {
        return Err(PositivityError::NegativeSquare(d2));
    }
    if d2.is_zero() {
        let k = divisibility(ns, dvec)?;
        return Ok((k + Int::one(), RrAssumption::FreeEllipticPencil));
    }
    Ok((d2 / Int::from(2) + Int::from(2), RrAssumption::NefBigNoFixedPart))
}

/// `(C·H, C^2/2 + 1)`.
pub fn curve_data(ns: &IntegerLattice, c: &FrameVector, h: &FrameVector) -> Result<(Int, Int), PositivityError> {
    if !ns.contains(c)? || !ns.contains(h)? {
        return Err(PositivityError::NotInLattice);
    }
    let c2 = inner_int(c, c)?;
    if c2.is_odd() {
        return Err(PositivityError::OddSquare(c2));
    }
    Ok((inner_int(c, h)?, c2 / Int::from(2) + Int::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{LClasses, NsFamily};

    fn setup(f: NsFamily) -> (IntegerLattice, LClasses) {
        let ns = f.make().unwrap();
        let c = LClasses::new(ns.frame());
        (ns, c)
    }

    #[test]
    fn arrangements_count() {
        let mut n = 0;
        for_each_signed_arrangement(2, |_| n += 1);
        assert_eq!(n, 28);
        let mut m = 0;
        for_each_signed_arrangement(4, |_| m += 1);
        // one 2, or four 1s
        assert_eq!(m, 8 + 70);
    }

    #[test]
    fn l6_l_minus_nhat_ample() {
        let (ns, c) = setup(NsFamily::l(3));
        let d = c.l.sub(&c.nhat).unwrap();
        let r = classify_positivity(&ns, &d).unwrap();
        assert_eq!(r.status, PositivityStatus::Ample);
        assert!(r.witness.is_none());
    }

    #[test]
    fn l_is_pseudo_ample() {
        let (ns, c) = setup(NsFamily::l(3));
        let r = classify_positivity(&ns, &c.l).unwrap();
        assert_eq!(r.status, PositivityStatus::PseudoAmple);
        let w = r.witness.unwrap();
        assert!(c.n.contains(&w));
    }

    #[test]
    fn l4_pencil_and_rr() {
        let (ns, c) = setup(NsFamily::l(2));
        let d = c.l.sub(&c.nhat).unwrap();
        assert_eq!(classify_positivity(&ns, &d).unwrap().status, PositivityStatus::Nef);
        match pencil_decomposition(&ns, &d).unwrap() {
            Some(PencilDecomposition::Multiple { k, e }) => {
                assert!(k.is_one());
                assert_eq!(e, d);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(riemann_roch_h0(&ns, &d).unwrap().0, Int::from(2));
        assert_eq!(riemann_roch_h0(&ns, &d.scale_int(2)).unwrap().0, Int::from(3));
    }

    #[test]
    fn l_prime_4_cone() {
        let (ns, c) = setup(NsFamily::l_prime(2));
        match pencil_decomposition(&ns, &c.l).unwrap() {
            Some(PencilDecomposition::Cone { e, gamma0, gamma1 }) => {
                assert_eq!(e, c.half_glue(&[1, 2]));
                let mut gs = [gamma0, gamma1];
                gs.sort_by(|a, b| a.partial_cmp(b).unwrap());
                assert!(gs.contains(c.n(1)) && gs.contains(c.n(2)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn hyperelliptic_examples() {
        let (ns, c) = setup(NsFamily::l(3));
        let d = c.l.sub(&c.nhat).unwrap();
        assert_eq!(hyperelliptic_test(&ns, &d).unwrap(), HyperellipticVerdict::DoubleCover(HyperellipticWitness::Genus2));
        let (ns, c) = setup(NsFamily::l_prime(4));
        let d = c.l.sub(&c.nhat).unwrap();
        match hyperelliptic_test(&ns, &d).unwrap() {
            HyperellipticVerdict::DoubleCover(HyperellipticWitness::Elliptic(e)) => {
                assert_eq!(inner(&e, &d).unwrap(), Rat::from_integer(Int::from(2)));
            }
            other => panic!("unexpected {other:?}"),
        }
        let (ns, c) = setup(NsFamily::l(5));
        let d = c.l.sub(&c.nhat).unwrap();
        assert_eq!(hyperelliptic_test(&ns, &d).unwrap(), HyperellipticVerdict::Birational);
    }

    #[test]
    fn curve_data_examples() {
        let (ns, c) = setup(NsFamily::l(3));
        let d = c.l.sub(&c.nhat).unwrap();
        assert_eq!(curve_data(&ns, &d, &c.l).unwrap(), (Int::from(6), Int::from(2)));
        let (ns, c) = setup(NsFamily::l_prime(2));
        let c2 = c.half_glue(&[3, 4, 5, 6, 7, 8]);
        assert_eq!(curve_data(&ns, &c2, &c.l).unwrap(), (Int::from(2), Int::zero()));
    }

    #[test]
    fn even_set_checks() {
        let (ns, c) = setup(NsFamily::l(2));
        assert!(is_even_set(&ns, &c.n).unwrap());
        let unglued = crate::families::unglued_l(2);
        assert!(!is_even_set(&unglued, &c.n).unwrap());
        let mut bad = c.n.to_vec();
        bad[1] = c.n(1).clone();
        assert!(matches!(is_even_set(&ns, &bad), Err(PositivityError::NotOrthogonal { i: 0, j: 1, .. })));
    }
}
