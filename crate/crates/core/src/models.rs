//! Projective models of the `L` families, the tabulated model data, the
//! `X <-> Y` correspondence and the configuration lattices that force an
//! even set.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::chow::{self, ChowError, CompleteIntersection};
use crate::exactlin::{self, Int, IntMatrix, RatMatrix};
use crate::families::{FamilyError, FamilyKind, GlueFlavor, LClasses, NsFamily};
use crate::lattice::{self, inner_int, Frame, FrameVector, IntegerLattice, LatticeError};
use crate::positivity::{
    self, HyperellipticVerdict, HyperellipticWitness, PencilDecomposition, PositivityError, PositivityStatus,
    RrAssumption,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Positivity(#[from] PositivityError),
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error("polarization {polarization} is not defined for {family}")]
    UndefinedPolarization { family: NsFamily, polarization: Polarization },
    #[error("polarization {polarization} of {family} is not nef")]
    NotNef { family: NsFamily, polarization: Polarization },
    #[error("{0} is not tabulated")]
    NotTabulated(NsFamily),
    #[error(transparent)]
    Divisor(#[from] DivisorParseError),
}

/// The named divisors used as polarizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    L,
    LMinusNhat,
    L1,
    L2,
    /// `L - N_1 - ... - N_r`.
    LMinusFirst(usize),
    /// `L - N_{r+1} - ... - N_8`.
    LMinusLast(usize),
    /// `2L - sum N_i`.
    TwiceLMinusAll,
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::L => f.write_str("L"),
            Self::LMinusNhat => f.write_str("L-Nhat"),
            Self::L1 => f.write_str("L1"),
            Self::L2 => f.write_str("L2"),
            Self::LMinusFirst(r) => {
                f.write_str("L")?;
                (1..=*r).try_for_each(|i| write!(f, "-N{i}"))
            }
            Self::LMinusLast(r) => {
                f.write_str("L")?;
                (r + 1..=8).try_for_each(|i| write!(f, "-N{i}"))
            }
            Self::TwiceLMinusAll => f.write_str("2L-N1-N2-N3-N4-N5-N6-N7-N8"),
        }
    }
}

/// `(L1, L2)` supports: `L_k = (L - sum_{S_k} N_i) / 2`.
fn half_supports(family: NsFamily) -> Option<(&'static [usize], &'static [usize])> {
    match family.glue_flavor()? {
        GlueFlavor::Pair => Some((&[1, 2], &[3, 4, 5, 6, 7, 8])),
        GlueFlavor::Quadruple => Some((&[1, 2, 3, 4], &[5, 6, 7, 8])),
    }
}

impl Polarization {
    pub fn vector(&self, family: NsFamily) -> Result<FrameVector, ModelError> {
        let undefined = || ModelError::UndefinedPolarization { family, polarization: *self };
        if !family.is_l_type() {
            return Err(undefined());
        }
        let c = LClasses::new(&family.frame());
        let v = match self {
            Self::L => c.l.clone(),
            Self::LMinusNhat => c.l.sub(&c.nhat)?,
            Self::L1 => c.half_glue(half_supports(family).ok_or_else(undefined)?.0),
            Self::L2 => c.half_glue(half_supports(family).ok_or_else(undefined)?.1),
            Self::LMinusFirst(r) if *r <= 8 => c.l.sub(&c.n_sum(&(1..=*r).collect::<Vec<_>>()))?,
            Self::LMinusLast(r) if *r <= 8 => c.l.sub(&c.n_sum(&(r + 1..=8).collect::<Vec<_>>()))?,
            Self::TwiceLMinusAll => c.l.scale_int(2).sub(&c.n_sum(&[1, 2, 3, 4, 5, 6, 7, 8]))?,
            _ => return Err(undefined()),
        };
        Ok(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ImageType {
    Node,
    Line,
    Conic,
    Degree(i64),
}

impl ImageType {
    pub fn from_degree(k: i64) -> Self {
        match k {
            0 => Self::Node,
            1 => Self::Line,
            2 => Self::Conic,
            k => Self::Degree(k),
        }
    }

    pub fn as_string(&self) -> String {
        match self {
            Self::Node => "node".into(),
            Self::Line => "line".into(),
            Self::Conic => "conic".into(),
            Self::Degree(k) => format!("degree_{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DoubleCoverTarget {
    Plane,
    Quadric,
    Cone,
    /// `D = 2B`, `B^2 = 2`: the Veronese surface.
    Veronese,
    /// Elliptic `E·D = 2` with `D^2 >= 6`: a rational normal scroll.
    Scroll,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapKind {
    ContractionToNodes,
    BirationalEmbedding,
    DoubleCover(DoubleCoverTarget),
    EllipticFibration,
}

impl MapKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::ContractionToNodes => "contraction_to_nodes",
            Self::BirationalEmbedding => "birational_embedding",
            Self::DoubleCover(DoubleCoverTarget::Plane) => "double_cover(plane)",
            Self::DoubleCover(DoubleCoverTarget::Quadric) => "double_cover(quadric)",
            Self::DoubleCover(DoubleCoverTarget::Cone) => "double_cover(cone)",
            Self::DoubleCover(DoubleCoverTarget::Veronese) => "double_cover(veronese)",
            Self::DoubleCover(DoubleCoverTarget::Scroll) => "double_cover(scroll)",
            Self::EllipticFibration => "elliptic_fibration",
        }
    }
}

/// Singular fibres of an elliptic fibration, restricted to `I1` and `I2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FiberConfiguration {
    pub i1: u32,
    pub i2: u32,
}

impl FiberConfiguration {
    pub fn euler_sum(&self) -> u32 {
        self.i1 + 2 * self.i2
    }
}

pub fn fibration_euler_check(config: FiberConfiguration) -> bool {
    config.euler_sum() == 24
}

/// Fibres of `|E|` when every `N_i` orthogonal to `E` is a component of its own
/// `I2` fibre and the remaining Euler number is carried by `I1` fibres.
pub fn fibration_from_pencil(ns: &IntegerLattice, e: &FrameVector) -> Result<FiberConfiguration, ModelError> {
    if !inner_int(e, e)?.is_zero() {
        return Err(PositivityError::UnknownFamily("fibration class must be isotropic").into());
    }
    let c = LClasses::new(ns.frame());
    let mut i2 = 0u32;
    for n in &c.n {
        if inner_int(e, n)?.is_zero() {
            i2 += 1;
        }
    }
    Ok(FiberConfiguration { i1: 24 - 2 * i2, i2 })
}

/// Every rank-9 family has an 11-dimensional moduli space.
pub const MODULI_COUNT: u32 = 11;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectiveModelDescriptor {
    pub family: NsFamily,
    pub polarization: Polarization,
    pub self_intersection: Int,
    pub h0: Int,
    pub rr_assumption: RrAssumption,
    pub target_dim: Int,
    pub map_kind: MapKind,
    pub degree: Int,
    pub even_set_images: Vec<ImageType>,
    pub moduli_count: u32,
    pub fibers: Option<FiberConfiguration>,
}

pub fn model_descriptor(family: NsFamily, polarization: Polarization) -> Result<ProjectiveModelDescriptor, ModelError> {
    let dvec = polarization.vector(family)?;
    let ns = family.make()?;
    if !ns.contains(&dvec)? {
        return Err(ModelError::UndefinedPolarization { family, polarization });
    }
    let report = positivity::classify_positivity(&ns, &dvec)?;
    if report.status == PositivityStatus::NotNef {
        return Err(ModelError::NotNef { family, polarization });
    }
    let d2 = report.self_intersection.clone();
    let (h0, rr_assumption) = positivity::riemann_roch_h0(&ns, &dvec)?;
    let c = LClasses::new(ns.frame());
    let mut pairings = Vec::with_capacity(8);
    for n in &c.n {
        pairings.push(inner_int(&dvec, n)?);
    }
    let even_set_images =
        pairings.iter().map(|k| ImageType::from_degree(k.to_i64().unwrap_or(i64::MAX))).collect::<Vec<_>>();

    let (map_kind, degree, fibers) = if d2.is_zero() {
        let k = positivity::divisibility(&ns, &dvec)?;
        let e = dvec.scale(&exactlin::Rat::new(Int::one(), k));
        (MapKind::EllipticFibration, Int::one(), Some(fibration_from_pencil(&ns, &e)?))
    } else {
        match positivity::hyperelliptic_test(&ns, &dvec)? {
            HyperellipticVerdict::Birational => {
                let kind = if pairings.iter().any(Zero::is_zero) {
                    MapKind::ContractionToNodes
                } else {
                    MapKind::BirationalEmbedding
                };
                (kind, d2.clone(), None)
            }
            HyperellipticVerdict::DoubleCover(w) => {
                let target = double_cover_target(&ns, &dvec, &d2, &w)?;
                (MapKind::DoubleCover(target), &d2 / Int::from(2), None)
            }
        }
    };
    Ok(ProjectiveModelDescriptor {
        family,
        polarization,
        self_intersection: d2,
        target_dim: &h0 - Int::one(),
        h0,
        rr_assumption,
        map_kind,
        degree,
        even_set_images,
        moduli_count: MODULI_COUNT,
        fibers,
    })
}

fn double_cover_target(
    ns: &IntegerLattice,
    dvec: &FrameVector,
    d2: &Int,
    w: &HyperellipticWitness,
) -> Result<DoubleCoverTarget, ModelError> {
    if *d2 == Int::from(2) {
        return Ok(DoubleCoverTarget::Plane);
    }
    if let Some(PencilDecomposition::Cone { .. }) = positivity::pencil_decomposition(ns, dvec)? {
        return Ok(DoubleCoverTarget::Cone);
    }
    match w {
        HyperellipticWitness::Half(_) => Ok(DoubleCoverTarget::Veronese),
        HyperellipticWitness::Elliptic(e) if *d2 == Int::from(4) => {
            let rest = dvec.sub(e)?;
            if inner_int(&rest, &rest)?.is_zero() && inner_int(e, &rest)? == Int::from(2) {
                Ok(DoubleCoverTarget::Quadric)
            } else {
                Ok(DoubleCoverTarget::Cone)
            }
        }
        _ => Ok(DoubleCoverTarget::Scroll),
    }
}

/// Reader-facing remarks on a positivity verdict for a named divisor shape.
pub fn positivity_notes(family: NsFamily, dvec: &FrameVector, status: PositivityStatus) -> Vec<String> {
    let mut notes = Vec::new();
    if family.kind != FamilyKind::LPrime {
        return notes;
    }
    for r in 1..=8usize {
        let Ok(v) = Polarization::LMinusFirst(r).vector(family) else { continue };
        if v == *dvec && family.param == r as u64 + 4 {
            notes.push(format!(
                "{} in {family}: d = r+4 is the boundary case described as nef; computed status is {} with D^2 = {}",
                Polarization::LMinusFirst(r),
                status.as_str(),
                2 * (family.param - r as u64)
            ));
        }
    }
    notes
}

/// One product model `phi_A x phi_B` from the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GoldenProduct {
    pub first: Polarization,
    pub second: Polarization,
    pub caption: &'static str,
    pub ambient: &'static str,
    pub matrix: [[i64; 2]; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GoldenModel {
    pub polarization: Polarization,
    pub caption: &'static str,
    pub target_dim: u64,
    pub map_kind: MapKind,
    pub degree: u64,
    pub images: [ImageType; 8],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GoldenRow {
    pub x: NsFamily,
    pub y: NsFamily,
    pub y_caption: &'static str,
    pub y_target_dim: u64,
    pub models: &'static [GoldenModel],
    pub products: &'static [GoldenProduct],
}

use ImageType::{Conic as C, Line as I, Node as O};

const NODES: [ImageType; 8] = [O; 8];
const LINES: [ImageType; 8] = [I; 8];

const fn gm(
    polarization: Polarization,
    caption: &'static str,
    target_dim: u64,
    map_kind: MapKind,
    degree: u64,
    images: [ImageType; 8],
) -> GoldenModel {
    GoldenModel { polarization, caption, target_dim, map_kind, degree, images }
}

/// The eleven rows of the model table, as published.
pub const GOLDEN_TABLE1: [GoldenRow; 11] = [
    GoldenRow {
        x: NsFamily::l(1),
        y: NsFamily::m_prime(2),
        y_caption: "smooth quartic in P3",
        y_target_dim: 3,
        models: &[gm(Polarization::L, "double plane (singular sextic)", 2, MapKind::DoubleCover(DoubleCoverTarget::Plane), 1, NODES)],
        products: &[],
    },
    GoldenRow {
        x: NsFamily::l(2),
        y: NsFamily::m_prime(4),
        y_caption: "complete intersection in P5",
        y_target_dim: 5,
        models: &[gm(Polarization::L, "quartic with even set of nodes", 3, MapKind::ContractionToNodes, 4, NODES)],
        products: &[],
    },
    GoldenRow {
        x: NsFamily::l_prime(2),
        y: NsFamily::m(1),
        y_caption: "double plane",
        y_target_dim: 2,
        models: &[
            gm(Polarization::L, "double cover of a cone", 3, MapKind::DoubleCover(DoubleCoverTarget::Cone), 2, NODES),
            gm(Polarization::L1, "elliptic fibration", 1, MapKind::EllipticFibration, 1, [I, I, O, O, O, O, O, O]),
        ],
        products: &[],
    },
    GoldenRow {
        x: NsFamily::l(3),
        y: NsFamily::m_prime(6),
        y_caption: "projective model in P7",
        y_target_dim: 7,
        models: &[
            gm(Polarization::L, "singular complete intersection in P4", 4, MapKind::ContractionToNodes, 6, NODES),
            gm(Polarization::LMinusNhat, "double plane (smooth sextic)", 2, MapKind::DoubleCover(DoubleCoverTarget::Plane), 1, LINES),
        ],
        products: &[GoldenProduct {
            first: Polarization::L,
            second: Polarization::LMinusNhat,
            caption: "complete intersection in P4xP2",
            ambient: "P4xP2: (2,0)+(1,1)^3",
            matrix: [[6, 6], [6, 2]],
        }],
    },
    GoldenRow {
        x: NsFamily::l(4),
        y: NsFamily::m_prime(8),
        y_caption: "projective model in P9",
        y_target_dim: 9,
        models: &[
            gm(Polarization::L, "singular complete intersection in P5", 5, MapKind::ContractionToNodes, 8, NODES),
            gm(Polarization::LMinusNhat, "smooth quartic in P3", 3, MapKind::BirationalEmbedding, 4, LINES),
        ],
        products: &[],
    },
    GoldenRow {
        x: NsFamily::l_prime(4),
        y: NsFamily::m(2),
        y_caption: "smooth quartic in P3",
        y_target_dim: 3,
        models: &[
            gm(Polarization::L, "singular complete intersection in P5", 5, MapKind::ContractionToNodes, 8, NODES),
            gm(Polarization::LMinusNhat, "double cover of a quadric", 3, MapKind::DoubleCover(DoubleCoverTarget::Quadric), 2, LINES),
        ],
        products: &[],
    },
    GoldenRow {
        x: NsFamily::l(5),
        y: NsFamily::m_prime(10),
        y_caption: "projective model in P11",
        y_target_dim: 11,
        models: &[
            gm(Polarization::LMinusNhat, "smooth complete intersection in P4", 4, MapKind::BirationalEmbedding, 6, LINES),
            gm(Polarization::LMinusFirst(4), "double cover of a plane", 2, MapKind::DoubleCover(DoubleCoverTarget::Plane), 1, [C, C, C, C, O, O, O, O]),
        ],
        products: &[],
    },
    GoldenRow {
        x: NsFamily::l(6),
        y: NsFamily::m_prime(12),
        y_caption: "projective model in P13",
        y_target_dim: 13,
        models: &[
            gm(Polarization::LMinusNhat, "smooth complete intersection in P5", 5, MapKind::BirationalEmbedding, 8, LINES),
            gm(Polarization::LMinusFirst(4), "singular quartic in P3 (mixed even set with conics)", 3, MapKind::ContractionToNodes, 4, [C, C, C, C, O, O, O, O]),
        ],
        products: &[],
    },
    GoldenRow {
        x: NsFamily::l_prime(6),
        y: NsFamily::m(3),
        y_caption: "complete intersection in P4",
        y_target_dim: 4,
        models: &[gm(Polarization::LMinusNhat, "smooth complete intersection in P5", 5, MapKind::BirationalEmbedding, 8, LINES)],
        products: &[GoldenProduct {
            first: Polarization::L2,
            second: Polarization::L1,
            caption: "surface of bidegree (2,3) in P1xP2",
            ambient: "P1xP2: (2,3)",
            matrix: [[0, 3], [3, 2]],
        }],
    },
    GoldenRow {
        x: NsFamily::l_prime(8),
        y: NsFamily::m(4),
        y_caption: "complete intersection in P5",
        y_target_dim: 5,
        models: &[],
        products: &[GoldenProduct {
            first: Polarization::L1,
            second: Polarization::L2,
            caption: "complete intersection in P2xP2",
            ambient: "P2xP2: (1,1)+(2,2)",
            matrix: [[2, 4], [4, 2]],
        }],
    },
    GoldenRow {
        x: NsFamily::l_prime(12),
        y: NsFamily::m(6),
        y_caption: "complete intersection in P7",
        y_target_dim: 7,
        models: &[],
        products: &[GoldenProduct {
            first: Polarization::L1,
            second: Polarization::L2,
            caption: "complete intersection in P3xP3",
            ambient: "P3xP3: (1,1)^4",
            matrix: [[4, 6], [6, 4]],
        }],
    },
];

pub fn golden_row(family: NsFamily) -> Option<&'static GoldenRow> {
    GOLDEN_TABLE1.iter().find(|r| r.x == family)
}

/// A computed product model: lattice Gram of the pair against the ambient intersection matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductModel {
    pub family: NsFamily,
    pub first: Polarization,
    pub second: Polarization,
    pub ambient: CompleteIntersection,
    pub lattice_gram: IntMatrix,
    pub chow_matrix: IntMatrix,
    pub ambient_is_k3: bool,
}

impl ProductModel {
    pub fn consistent(&self) -> bool {
        self.lattice_gram == self.chow_matrix && self.ambient_is_k3
    }
}

pub fn product_model(family: NsFamily, golden: &GoldenProduct) -> Result<ProductModel, ModelError> {
    let a = golden.first.vector(family)?;
    let b = golden.second.vector(family)?;
    let pair = [&a, &b];
    let mut rows = Vec::new();
    for x in pair {
        rows.push(pair.iter().map(|y| inner_int(x, y)).collect::<Result<Vec<_>, _>>()?);
    }
    let ambient: CompleteIntersection = golden.ambient.parse()?;
    Ok(ProductModel {
        family,
        first: golden.first,
        second: golden.second,
        lattice_gram: IntMatrix::from_rows(rows).map_err(LatticeError::from)?,
        chow_matrix: chow::intersection_matrix(&ambient)?,
        ambient_is_k3: chow::ci_is_k3(&ambient)?,
        ambient,
    })
}

/// Models computed for one tabulated family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table1Entry {
    pub golden: &'static GoldenRow,
    pub models: Vec<ProjectiveModelDescriptor>,
    pub products: Vec<ProductModel>,
    pub correspondence: NsFamily,
    pub mismatches: Vec<String>,
}

pub fn table1(family: NsFamily) -> Result<Table1Entry, ModelError> {
    let golden = golden_row(family).ok_or(ModelError::NotTabulated(family))?;
    let mut mismatches = Vec::new();
    let mut models = Vec::new();
    for g in golden.models {
        let m = model_descriptor(family, g.polarization)?;
        let mut check = |field: &str, got: String, want: String| {
            if got != want {
                mismatches.push(format!("{family} {}: {field} computed {got}, expected {want}", g.polarization));
            }
        };
        check("target_dim", m.target_dim.to_string(), g.target_dim.to_string());
        check("map_kind", m.map_kind.as_str().into(), g.map_kind.as_str().into());
        check("degree", m.degree.to_string(), g.degree.to_string());
        let imgs = |v: &[ImageType]| v.iter().map(ImageType::as_string).collect::<Vec<_>>().join(",");
        check("even_set_images", imgs(&m.even_set_images), imgs(&g.images));
        models.push(m);
    }
    let mut products = Vec::new();
    for g in golden.products {
        let p = product_model(family, g)?;
        let want = IntMatrix::from_i64_rows(&[&g.matrix[0], &g.matrix[1]]).map_err(LatticeError::from)?;
        if p.lattice_gram != want || p.chow_matrix != want || !p.ambient_is_k3 {
            mismatches.push(format!("{family} {}x{}: product data disagrees with {:?}", g.first, g.second, g.matrix));
        }
        products.push(p);
    }
    let correspondence = ns_correspondence(family);
    if correspondence != golden.y {
        mismatches.push(format!("{family}: partner computed {correspondence}, expected {}", golden.y));
    }
    let y_dim = golden.y.param + 1;
    if y_dim != golden.y_target_dim {
        mismatches.push(format!("{}: target dimension computed {y_dim}, expected {}", golden.y, golden.y_target_dim));
    }
    Ok(Table1Entry { golden, models, products, correspondence, mismatches })
}

pub fn ns_correspondence(family: NsFamily) -> NsFamily {
    family.correspondence()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DistinctnessReport {
    DistinctByGroup,
    SameGroupButConstraint(String),
    Compatible,
}

/// Invariant factors of a family; formal ones when the lattice is not constructible.
/// Invariant factors used for family comparison: computed when the family
/// is constructible, predicted otherwise.
pub fn comparison_group(f: NsFamily) -> Result<Vec<Int>, ModelError> {
    if f.is_constructible() {
        Ok(f.discriminant_group()?.invariant_factors)
    } else {
        let mut g = f.predicted_invariant_factors();
        g.sort();
        Ok(g)
    }
}

pub fn families_distinct(a: NsFamily, b: NsFamily) -> Result<DistinctnessReport, ModelError> {
    if a == b {
        return Ok(DistinctnessReport::Compatible);
    }
    Ok(distinctness_from_groups(a, &comparison_group(a)?, b, &comparison_group(b)?))
}

/// [`families_distinct`] with the groups from [`comparison_group`] supplied,
/// for batch comparisons.
pub fn distinctness_from_groups(a: NsFamily, ga: &[Int], b: NsFamily, gb: &[Int]) -> DistinctnessReport {
    if a == b {
        return DistinctnessReport::Compatible;
    }
    if ga != gb {
        return DistinctnessReport::DistinctByGroup;
    }
    let mprime = [a, b].into_iter().find(|f| f.kind == FamilyKind::MPrime);
    let detail = match mprime {
        Some(m) => {
            let m2 = m.square();
            if m.is_constructible() {
                format!("M' needs M^2 = 2d' ≡ 0 mod 4 (d ≡ 0 mod 4 in the L-normalisation); here M^2 = {m2}, d' = {}: constraint satisfied, so only the existence constraint separates the families", m.param)
            } else {
                format!("M' needs M^2 = 2d' ≡ 0 mod 4 (d ≡ 0 mod 4 in the L-normalisation); here M^2 = {m2}, d' = {} is odd: M' is excluded", m.param)
            }
        }
        None => "same discriminant group; no existence constraint distinguishes the families".into(),
    };
    DistinctnessReport::SameGroupButConstraint(detail)
}

/// A configuration of curves whose intersection numbers force an even set.
#[derive(Debug, Clone)]
pub struct ConfigurationCheck {
    pub name: &'static str,
    pub family: NsFamily,
    pub generator_names: Vec<String>,
    pub generator_gram: IntMatrix,
    pub lattice: IntegerLattice,
    /// Index of the span of the raw curve classes in the family lattice.
    pub raw_index: Int,
    /// Generators reproduce the Gram matrix and span the family lattice.
    pub generators_onto: bool,
    /// The chosen basis maps isometrically onto the family's normative basis.
    pub isometric: bool,
    pub basis_map: RatMatrix,
}

struct Config {
    name: &'static str,
    family: NsFamily,
    names: Vec<String>,
    gram: Vec<Vec<i64>>,
    images: Vec<FrameVector>,
    /// Number of leading generators that are curve classes; later ones are adjoined.
    raw: usize,
    basis: Vec<Vec<i64>>,
}

impl Config {
    fn new(name: &'static str, family: NsFamily, names: &[&str]) -> Self {
        let n = names.len();
        Self {
            name,
            family,
            names: names.iter().map(|s| s.to_string()).collect(),
            gram: vec![vec![0; n]; n],
            images: Vec::new(),
            raw: n,
            basis: Vec::new(),
        }
    }

    fn set(&mut self, i: usize, j: usize, v: i64) {
        self.gram[i][j] = v;
        self.gram[j][i] = v;
    }
}

fn r_names(first: &[&'static str], prefix: &str) -> Vec<String> {
    let mut v: Vec<String> = first.iter().map(|s| s.to_string()).collect();
    v.extend((1..=8).map(|i| format!("{prefix}{i}")));
    v
}

/// Two polarizations `A1, A2` and eight disjoint curves `R_i`.
fn two_map_config(
    name: &'static str,
    family: NsFamily,
    squares: (i64, i64, i64),
    a1_r: [i64; 8],
    a2_r: [i64; 8],
    images: (FrameVector, FrameVector),
) -> Config {
    let names = r_names(&["A1", "A2"], "R");
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut c = Config::new(name, family, &refs);
    c.set(0, 0, squares.0);
    c.set(1, 1, squares.1);
    c.set(0, 1, squares.2);
    for i in 0..8 {
        c.set(2 + i, 2 + i, -2);
        c.set(0, 2 + i, a1_r[i]);
        c.set(1, 2 + i, a2_r[i]);
    }
    let cl = LClasses::new(&family.frame());
    c.images = vec![images.0, images.1];
    c.images.extend(cl.n.iter().cloned());
    c
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn combo(n: usize, terms: &[(usize, i64)]) -> Vec<i64> {
    let mut v = vec![0; n];
    for &(i, x) in terms {
        v[i] += x;
    }
    v
}

fn configurations() -> Result<Vec<Config>, ModelError> {
    let mut out = Vec::new();

    // Double cover of a cone: E', Γ0..Γ7, C2 with L' = 2E' + Γ0 + Γ1.
    {
        let f = NsFamily::l_prime(2);
        let names = ["E'", "G0", "G1", "G2", "G3", "G4", "G5", "G6", "G7", "C2"];
        let mut c = Config::new("double cover of a cone", f, &names);
        c.set(0, 1, 1);
        c.set(0, 2, 1);
        c.set(0, 9, 1);
        for i in 1..=8 {
            c.set(i, i, -2);
        }
        c.set(9, 9, -2);
        for i in 3..=8 {
            c.set(9, i, 1);
        }
        let cl = LClasses::new(&f.frame());
        c.images.push(cl.half_glue(&[1, 2]));
        c.images.extend(cl.n.iter().cloned());
        c.images.push(cl.half_glue(&[3, 4, 5, 6, 7, 8]));
        // (E', Γ0..Γ6, L' - E' - C2) -> (g, N1..N7, Nhat)
        let mut basis: Vec<Vec<i64>> = (0..8).map(|i| unit(10, i)).collect();
        basis.push(combo(10, &[(0, 1), (1, 1), (2, 1), (9, -1)]));
        c.basis = basis;
        out.push(c);
    }

    let std_basis = |n: usize, glue_terms: &[(usize, i64)], first: &[(usize, i64)]| -> Vec<Vec<i64>> {
        let mut b = vec![combo(n, first)];
        b.extend((2..9).map(|i| unit(n, i)));
        b.push(combo(n, glue_terms));
        b
    };

    // P4 x P2: A1 contracts the R_i, A2 maps them to lines.
    {
        let f = NsFamily::l(3);
        let cl = LClasses::new(&f.frame());
        let mut c = two_map_config("complete intersection in P4xP2", f, (6, 2, 6), [0; 8], [1; 8], (cl.l.clone(), cl.l.sub(&cl.nhat)?));
        c.basis = std_basis(10, &[(0, 1), (1, -1)], &[(0, 1)]);
        out.push(c);
    }

    // Three quadrics in P5, first case: A1^2 = 8, A2^2 = 4.
    {
        let f = NsFamily::l(4);
        let cl = LClasses::new(&f.frame());
        let mut c = two_map_config("complete intersection of three quadrics (nodes and lines)", f, (8, 4, 8), [0; 8], [1; 8], (cl.l.clone(), cl.l.sub(&cl.nhat)?));
        c.basis = std_basis(10, &[(0, 1), (1, -1)], &[(0, 1)]);
        out.push(c);
    }

    // Three quadrics in P5, second case: two half-curves C1, C2 through four nodes each.
    {
        let f = NsFamily::l_prime(4);
        let names = ["L", "N1", "N2", "N3", "N4", "N5", "N6", "N7", "N8", "C1", "C2"];
        let mut c = Config::new("complete intersection of three quadrics (two singular quadrics)", f, &names);
        c.set(0, 0, 8);
        for i in 1..=8 {
            c.set(i, i, -2);
            c.set(9, i, i64::from(i <= 4));
            c.set(10, i, i64::from(i > 4));
        }
        c.set(0, 9, 4);
        c.set(0, 10, 4);
        c.set(9, 10, 2);
        let cl = LClasses::new(&f.frame());
        c.images.push(cl.l.clone());
        c.images.extend(cl.n.iter().cloned());
        c.images.push(cl.half_glue(&[1, 2, 3, 4]));
        c.images.push(cl.half_glue(&[5, 6, 7, 8]));
        // (C1, N1..N7, L - C1 - C2)
        let mut basis = vec![unit(11, 9)];
        basis.extend((1..8).map(|i| unit(11, i)));
        basis.push(combo(11, &[(0, 1), (9, -1), (10, -1)]));
        c.basis = basis;
        out.push(c);
    }

    // Double planes: Wehler surfaces, lines.
    {
        let f = NsFamily::l_prime(8);
        let cl = LClasses::new(&f.frame());
        let mut c = two_map_config(
            "Wehler surface",
            f,
            (2, 2, 4),
            [0, 0, 0, 0, 1, 1, 1, 1],
            [1, 1, 1, 1, 0, 0, 0, 0],
            (cl.half_glue(&[5, 6, 7, 8]), cl.half_glue(&[1, 2, 3, 4])),
        );
        // (A2, R1..R7, A2 - A1 + R1 + R2 + R3 + R4)
        c.basis = std_basis(10, &[(1, 1), (0, -1), (2, 1), (3, 1), (4, 1), (5, 1)], &[(1, 1)]);
        out.push(c);
    }

    // Double planes with conics, and the mixed even set on a quartic.
    for (name, d) in [("double planes with conics", 5u64), ("mixed even set", 6)] {
        let f = NsFamily::l(d);
        let cl = LClasses::new(&f.frame());
        let a1 = cl.l.sub(&cl.n_sum(&[5, 6, 7, 8]))?;
        let a2 = cl.l.sub(&cl.n_sum(&[1, 2, 3, 4]))?;
        let s = 2 * d as i64 - 8;
        let mut c = two_map_config(name, f, (s, s, 2 * d as i64), [0, 0, 0, 0, 2, 2, 2, 2], [2, 2, 2, 2, 0, 0, 0, 0], (a1, a2));
        // adjoin δ = (R1 + ... + R8)/2: pairs 4 with A1, A2 and 0 with... computed from the data
        let n = 11;
        for row in c.gram.iter_mut() {
            row.push(0);
        }
        c.gram.push(vec![0; n]);
        c.names.push("delta".into());
        c.set(10, 0, 4);
        c.set(10, 1, 4);
        for i in 2..10 {
            c.set(10, i, -1);
        }
        c.set(10, 10, -4);
        c.images.push(cl.nhat.clone());
        c.raw = 10;
        // (A2 + R1 + R2 + R3 + R4, R1..R7, delta) -> (L, N1..N7, Nhat)
        let mut basis = vec![combo(n, &[(1, 1), (2, 1), (3, 1), (4, 1), (5, 1)])];
        basis.extend((2..9).map(|i| unit(n, i)));
        basis.push(unit(n, 10));
        c.basis = basis;
        out.push(c);
    }

    // Bidegree (2,3) in P1 x P2: A1 elliptic, A2 a double plane.
    {
        let f = NsFamily::l_prime(6);
        let cl = LClasses::new(&f.frame());
        let mut c = two_map_config(
            "surface of bidegree (2,3) in P1xP2",
            f,
            (0, 2, 3),
            [0, 0, 1, 1, 1, 1, 1, 1],
            [1, 1, 0, 0, 0, 0, 0, 0],
            (cl.half_glue(&[3, 4, 5, 6, 7, 8]), cl.half_glue(&[1, 2])),
        );
        c.basis = std_basis(10, &[(1, 1), (0, -1), (2, 1), (3, 1)], &[(1, 1)]);
        out.push(c);
    }

    // Four (1,1) hypersurfaces in P3 x P3.
    {
        let f = NsFamily::l_prime(12);
        let cl = LClasses::new(&f.frame());
        let mut c = two_map_config(
            "complete intersection in P3xP3",
            f,
            (4, 4, 6),
            [0, 0, 0, 0, 1, 1, 1, 1],
            [1, 1, 1, 1, 0, 0, 0, 0],
            (cl.half_glue(&[5, 6, 7, 8]), cl.half_glue(&[1, 2, 3, 4])),
        );
        c.basis = std_basis(10, &[(1, 1), (0, -1), (2, 1), (3, 1), (4, 1), (5, 1)], &[(1, 1)]);
        out.push(c);
    }
    Ok(out)
}

fn rows_i64(rows: &[Vec<i64>]) -> Result<IntMatrix, ModelError> {
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    Ok(IntMatrix::from_i64_rows(&refs).map_err(LatticeError::from)?)
}

fn check_config(c: Config) -> Result<ConfigurationCheck, ModelError> {
    let target = c.family.make()?;
    let gen_gram = rows_i64(&c.gram)?;
    let generators_onto = lattice::generators_map_onto(&gen_gram, &target, &c.images)?;

    let mut raw_rows = Vec::new();
    for x in &c.images[..c.raw] {
        raw_rows.push(target.coordinates(x)?.ok_or(LatticeError::NotInLattice)?);
    }
    let snf = exactlin::smith_normal_form(&IntMatrix::from_rows(raw_rows).map_err(LatticeError::from)?);
    let raw_index = if snf.rank == target.rank() {
        snf.diagonal().iter().fold(Int::one(), |acc, x| acc * x.abs())
    } else {
        Int::zero()
    };

    // The configuration lattice in its chosen basis, straight from the intersection data.
    let b = rows_i64(&c.basis)?;
    let gram = gen_gram.congruent(&b).map_err(LatticeError::from)?;
    let names = (0..c.basis.len()).map(|i| format!("b{i}")).collect();
    let config_lattice = IntegerLattice::from_gram(c.name, gram, names)?;

    // Images of the chosen basis, in coordinates of the family's normative basis.
    let mut rows = Vec::new();
    for coeffs in &c.basis {
        let terms: Vec<(i64, &FrameVector)> = coeffs.iter().copied().zip(c.images.iter()).collect();
        let v = FrameVector::linear_combination(target.frame(), &terms)?;
        let coords = target.rational_coordinates(&v)?.ok_or(LatticeError::NotInLattice)?;
        rows.push(coords);
    }
    let basis_map = RatMatrix::from_rows(rows).map_err(LatticeError::from)?;
    let isometric = lattice::isometry_from_basis_map(&config_lattice, &target, &basis_map)?;

    Ok(ConfigurationCheck {
        name: c.name,
        family: c.family,
        generator_names: c.names,
        generator_gram: gen_gram,
        lattice: config_lattice,
        raw_index,
        generators_onto,
        isometric,
        basis_map,
    })
}

pub fn sufficient_condition_lattices() -> Result<Vec<ConfigurationCheck>, ModelError> {
    configurations()?.into_iter().map(check_config).collect()
}

/// The literal change of basis for the cone configuration with
/// `C2 + E' - L'` sent to `Nhat`. Returns whether it is an isometry.
pub fn cone_literal_map_is_isometry() -> Result<bool, ModelError> {
    let mut c = configurations()?.into_iter().next().expect("cone configuration is first");
    let last = c.basis.len() - 1;
    c.basis[last] = combo(10, &[(9, 1), (0, -1), (1, -1), (2, -1)]);
    let gen_gram = rows_i64(&c.gram)?;
    let gram = gen_gram.congruent(&rows_i64(&c.basis)?).map_err(LatticeError::from)?;
    let names = (0..9).map(|i| format!("b{i}")).collect();
    let lit = IntegerLattice::from_gram("cone (literal)", gram, names)?;
    let target = c.family.make()?;
    Ok(lattice::isometry_from_basis_map(&lit, &target, &RatMatrix::identity(9))?)
}

/// Grammar of the divisor mini-language.
pub const DIVISOR_GRAMMAR: &str = "expr := ['-'] term (('+'|'-') term)* ; term := [INT ['*']] atom ['/' INT] ; atom := L | Nhat | N1..N8 | L1 | L2 | M | E1..E8 | '(' expr ')'";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse divisor {input:?} at offset {offset}: {reason}; expected {grammar}", grammar = DIVISOR_GRAMMAR)]
pub struct DivisorParseError {
    pub input: String,
    pub offset: usize,
    pub reason: String,
}

struct DivisorParser<'a> {
    input: &'a str,
    chars: Vec<char>,
    pos: usize,
    family: NsFamily,
    frame: alloc::sync::Arc<Frame>,
}

impl DivisorParser<'_> {
    fn err(&self, reason: impl Into<String>) -> ModelError {
        ModelError::Divisor(DivisorParseError { input: self.input.to_string(), offset: self.pos, reason: reason.into() })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn int(&mut self) -> Option<i64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        self.chars[start..self.pos].iter().collect::<String>().parse().ok()
    }

    fn expr(&mut self) -> Result<FrameVector, ModelError> {
        let mut sign = 1;
        if matches!(self.peek(), Some('-' | '−')) {
            self.pos += 1;
            sign = -1;
        }
        let mut acc = self.term()?.scale_int(sign);
        while let Some(c) = self.peek() {
            let s = match c {
                '+' => 1,
                '-' | '−' => -1,
                _ => break,
            };
            self.pos += 1;
            acc = acc.add(&self.term()?.scale_int(s))?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<FrameVector, ModelError> {
        let coeff = self.int();
        if coeff.is_some() && self.peek() == Some('*') {
            self.pos += 1;
        }
        let atom = if coeff.is_some() && !self.peek().is_some_and(|c| c.is_ascii_alphabetic() || c == '(') {
            return Err(self.err("bare integers are not divisors"));
        } else {
            self.atom()?
        };
        let mut v = atom.scale_int(coeff.unwrap_or(1));
        if self.peek() == Some('/') {
            self.pos += 1;
            let den = self.int().filter(|&d| d > 0).ok_or_else(|| self.err("expected a positive denominator"))?;
            v = v.scale(&exactlin::Rat::new(Int::one(), Int::from(den)));
        }
        Ok(v)
    }

    fn atom(&mut self) -> Result<FrameVector, ModelError> {
        if self.peek() == Some('(') {
            self.pos += 1;
            let v = self.expr()?;
            if self.peek() != Some(')') {
                return Err(self.err("expected ')'"));
            }
            self.pos += 1;
            return Ok(v);
        }
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        let word: String = self.chars[start..self.pos].iter().collect();
        let index = |p: &str| word.strip_prefix(p).and_then(|r| r.parse::<usize>().ok()).filter(|i| (1..=8).contains(i));
        let l_type = self.family.is_l_type();
        let v = match word.as_str() {
            "L" | "M" if (word == "L") == l_type => FrameVector::unit(&self.frame, 0),
            "Nhat" if l_type => LClasses::new(&self.frame).nhat,
            "L1" if l_type => Polarization::L1.vector(self.family)?,
            "L2" if l_type => Polarization::L2.vector(self.family)?,
            _ => match (index("N"), index("E")) {
                (Some(i), _) if l_type && word.starts_with('N') => FrameVector::unit(&self.frame, i),
                (_, Some(i)) if !l_type && word.starts_with('E') => FrameVector::unit(&self.frame, i),
                _ => {
                    self.pos = start;
                    return Err(self.err(format!("unknown symbol {word:?} for {}", self.family)));
                }
            },
        };
        Ok(v)
    }
}

/// Parses a divisor expression in the frame of `family`. Membership in the
/// family lattice is the caller's check.
pub fn parse_divisor(family: NsFamily, input: &str) -> Result<FrameVector, ModelError> {
    let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = DivisorParser { input, chars: compact.chars().collect(), pos: 0, family, frame: family.frame() };
    if p.chars.is_empty() {
        return Err(p.err("empty expression"));
    }
    let v = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

impl FromStr for Polarization {
    type Err = DivisorParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || DivisorParseError { input: s.to_string(), offset: 0, reason: "unknown polarization name".into() };
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        match t.as_str() {
            "L" => return Ok(Self::L),
            "L-Nhat" => return Ok(Self::LMinusNhat),
            "L1" => return Ok(Self::L1),
            "L2" => return Ok(Self::L2),
            "2L-N1-N2-N3-N4-N5-N6-N7-N8" => return Ok(Self::TwiceLMinusAll),
            _ => {}
        }
        for r in 1..=8 {
            if Self::LMinusFirst(r).to_string() == t {
                return Ok(Self::LMinusFirst(r));
            }
            if Self::LMinusLast(r).to_string() == t {
                return Ok(Self::LMinusLast(r));
            }
        }
        Err(err())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polarization_names_roundtrip() {
        for p in [Polarization::L, Polarization::LMinusNhat, Polarization::L1, Polarization::LMinusFirst(4), Polarization::LMinusLast(4), Polarization::TwiceLMinusAll] {
            assert_eq!(p.to_string().parse::<Polarization>().unwrap(), p);
        }
    }

    #[test]
    fn divisor_language() {
        let f = NsFamily::l_prime(2);
        let c = LClasses::new(&f.frame());
        assert_eq!(parse_divisor(f, "L - Nhat").unwrap(), c.l.sub(&c.nhat).unwrap());
        assert_eq!(parse_divisor(f, "(L-N1-N2)/2").unwrap(), c.half_glue(&[1, 2]));
        assert_eq!(parse_divisor(f, "L1").unwrap(), c.half_glue(&[1, 2]));
        assert_eq!(parse_divisor(f, "2L-N3").unwrap(), c.l.scale_int(2).sub(c.n(3)).unwrap());
        assert!(parse_divisor(f, "L+N9").is_err());
        assert!(parse_divisor(f, "L+").is_err());
        assert!(parse_divisor(f, "E1").is_err());
        let m = NsFamily::m(2);
        assert!(parse_divisor(m, "M-E1").is_ok());
        assert!(parse_divisor(m, "L").is_err());
    }

    #[test]
    fn fibration_counts() {
        for c in [FiberConfiguration { i1: 12, i2: 6 }, FiberConfiguration { i1: 16, i2: 4 }, FiberConfiguration { i1: 20, i2: 2 }] {
            assert!(fibration_euler_check(c));
        }
        assert!(!fibration_euler_check(FiberConfiguration { i1: 12, i2: 5 }));
    }

    #[test]
    fn distinctness() {
        assert_eq!(families_distinct(NsFamily::l(3), NsFamily::m(3)).unwrap(), DistinctnessReport::DistinctByGroup);
        assert!(matches!(families_distinct(NsFamily::l(4), NsFamily::m_prime(4)).unwrap(), DistinctnessReport::SameGroupButConstraint(s) if s.contains("satisfied")));
        assert!(matches!(families_distinct(NsFamily::l(3), NsFamily::m_prime(3)).unwrap(), DistinctnessReport::SameGroupButConstraint(s) if s.contains("excluded")));
    }

    #[test]
    fn cone_literal_sign() {
        assert!(!cone_literal_map_is_isometry().unwrap());
    }
}
