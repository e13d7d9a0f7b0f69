//! Versioned JSON report schemas.
//!
//! Lattice entries and vector coordinates are decimal strings; invariants
//! such as discriminant factors, squares and Chow matrices are exact JSON
//! numbers. Every report carries `"schema": "k3evenset/1"` and a `"kind"`.

use std::sync::Arc;

use k3evenset_core::exactlin::{Int, IntMatrix, Rat, RatMatrix};
use k3evenset_core::lattice::{Frame, FrameVector, IntegerLattice, LatticeError};
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "k3evenset/1";

/// Arbitrary-precision integers as decimal strings.
pub mod int_str {
    use super::Int;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Int, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Int, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Arbitrary-precision integers as exact JSON numbers.
pub mod int_num {
    use super::Int;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &Int, s: S) -> Result<S::Ok, S::Error> {
        let n: serde_json::Number = x.to_string().parse().map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Int, D::Error> {
        let n = serde_json::Number::deserialize(d)?;
        n.to_string().parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! nested {
    ($name:ident, $inner:literal) => {
        pub mod $name {
            use super::Int;
            use serde::{Deserialize, Deserializer, Serialize, Serializer};

            #[derive(Serialize, Deserialize)]
            struct W(#[serde(with = $inner)] Int);

            pub fn serialize<S: Serializer>(x: &[Int], s: S) -> Result<S::Ok, S::Error> {
                x.iter().map(|v| W(v.clone())).collect::<Vec<_>>().serialize(s)
            }

            pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Int>, D::Error> {
                Ok(Vec::<W>::deserialize(d)?.into_iter().map(|w| w.0).collect())
            }
        }
    };
}

macro_rules! nested2 {
    ($name:ident, $inner:literal) => {
        pub mod $name {
            use super::Int;
            use serde::{Deserialize, Deserializer, Serialize, Serializer};

            #[derive(Serialize, Deserialize)]
            struct W(#[serde(with = $inner)] Vec<Int>);

            pub fn serialize<S: Serializer>(x: &[Vec<Int>], s: S) -> Result<S::Ok, S::Error> {
                x.iter().map(|v| W(v.clone())).collect::<Vec<_>>().serialize(s)
            }

            pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Int>>, D::Error> {
                Ok(Vec::<W>::deserialize(d)?.into_iter().map(|w| w.0).collect())
            }
        }
    };
}

nested!(vec_str, "super::int_str");
nested!(vec_num, "super::int_num");
nested2!(mat_str, "super::vec_str");
nested2!(mat_num, "super::vec_num");

fn matrix_rows(m: &IntMatrix) -> Vec<Vec<Int>> {
    m.row_vecs()
}

/// `"p/q"`, or `"p"` for integers.
pub fn rat_string(r: &Rat) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameVectorJson {
    pub frame: String,
    #[serde(with = "vec_str")]
    pub num: Vec<Int>,
    #[serde(with = "int_str")]
    pub den: Int,
}

impl FrameVectorJson {
    pub fn new(v: &FrameVector) -> Self {
        Self { frame: v.frame().name().to_string(), num: v.numerators().to_vec(), den: v.denominator().clone() }
    }

    /// Rebuilds the vector in `frame`, which must carry the recorded name.
    pub fn to_vector(&self, frame: &Arc<Frame>) -> Result<FrameVector, LatticeError> {
        if frame.name() != self.frame {
            return Err(LatticeError::FrameMismatch { left: self.frame.clone(), right: frame.name().to_string() });
        }
        FrameVector::new(frame, self.num.clone(), self.den.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameJson {
    pub parent: String,
    #[serde(with = "mat_str")]
    pub parent_gram: Vec<Vec<Int>>,
    #[serde(with = "mat_str")]
    pub matrix_num: Vec<Vec<Int>>,
    #[serde(with = "int_str")]
    pub matrix_den: Int,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub name: String,
    pub rank: usize,
    #[serde(with = "mat_str")]
    pub gram: Vec<Vec<Int>>,
    pub basis_names: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub frame: Option<FrameJson>,
}

impl LatticeJson {
    pub fn new(l: &IntegerLattice) -> Self {
        let (num, den) = l.basis_matrix().to_common_denominator();
        Self {
            name: l.name().to_string(),
            rank: l.rank(),
            gram: matrix_rows(l.gram()),
            basis_names: l.basis_names().to_vec(),
            frame: Some(FrameJson {
                parent: l.frame().name().to_string(),
                parent_gram: matrix_rows(l.frame().gram()),
                matrix_num: matrix_rows(&num),
                matrix_den: den,
            }),
        }
    }

    /// Rebuilds the lattice; the recorded Gram matrix must match the embedding.
    pub fn to_lattice(&self) -> Result<IntegerLattice, LatticeError> {
        let gram = IntMatrix::from_rows(self.gram.clone())?;
        let lattice = match &self.frame {
            None => IntegerLattice::from_gram(self.name.clone(), gram.clone(), self.basis_names.clone())?,
            Some(f) => {
                let frame = Frame::new(f.parent.clone(), IntMatrix::from_rows(f.parent_gram.clone())?)?;
                let den = Rat::from_integer(f.matrix_den.clone());
                let basis = RatMatrix::from_rows(
                    f.matrix_num.iter().map(|r| r.iter().map(|x| Rat::from_integer(x.clone()) / &den).collect()).collect(),
                )?;
                IntegerLattice::in_frame(self.name.clone(), &frame, basis, self.basis_names.clone())?
            }
        };
        if *lattice.gram() != gram {
            return Err(LatticeError::NotInLattice);
        }
        Ok(lattice)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscReport {
    pub schema: String,
    pub kind: String,
    pub family: String,
    pub lattice: LatticeJson,
    #[serde(with = "vec_num")]
    pub invariant_factors: Vec<Int>,
    #[serde(with = "int_num")]
    pub order: Int,
    pub lifts: Vec<FrameVectorJson>,
    #[serde(with = "vec_num")]
    pub predicted: Vec<Int>,
    pub matches_prediction: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlueRow {
    pub d: u64,
    pub admissible: Vec<Vec<usize>>,
    pub count: usize,
    pub classes: Vec<Vec<usize>>,
    pub overlattices_even: bool,
    pub n_primitive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluesReport {
    pub schema: String,
    pub kind: String,
    pub results: Vec<GlueRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlatticeReport {
    pub schema: String,
    pub kind: String,
    pub d: u64,
    pub support: Vec<usize>,
    pub glue: FrameVectorJson,
    pub lattice: LatticeJson,
    pub even: bool,
    pub n_primitive: bool,
    #[serde(with = "vec_num")]
    pub invariant_factors: Vec<Int>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleJson {
    pub bound: String,
    pub obstructions: usize,
    pub discrepancies: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivityJson {
    pub schema: String,
    pub kind: String,
    pub family: String,
    pub divisor: String,
    pub vector: FrameVectorJson,
    #[serde(with = "int_num")]
    pub d2: Int,
    pub status: String,
    pub witness: Option<FrameVectorJson>,
    pub a_max: String,
    pub exhaustive: bool,
    pub assumptions: Vec<String>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle: Option<OracleJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvenSetReport {
    pub schema: String,
    pub kind: String,
    pub family: String,
    pub octet: Vec<String>,
    /// `even_set`, `not_even_set` or `precondition_unsatisfiable`.
    pub verdict: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    /// `genus2`, `elliptic` or `half`.
    pub kind: String,
    pub class: Option<FrameVectorJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperellipticReport {
    pub schema: String,
    pub kind: String,
    pub family: String,
    pub divisor: String,
    #[serde(with = "int_num")]
    pub d2: Int,
    /// `double_cover` or `birational`.
    pub verdict: String,
    pub witness: Option<WitnessJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChowReport {
    pub schema: String,
    pub kind: String,
    pub input: String,
    #[serde(with = "mat_num")]
    pub matrix: Vec<Vec<Int>>,
    pub k3: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibersJson {
    pub i1: u32,
    pub i2: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelJson {
    pub polarization: String,
    pub caption: String,
    #[serde(with = "int_num")]
    pub d2: Int,
    #[serde(with = "int_num")]
    pub h0: Int,
    pub h0_assumption: String,
    #[serde(with = "int_num")]
    pub target_dim: Int,
    pub map_kind: String,
    #[serde(with = "int_num")]
    pub degree: Int,
    pub even_set_images: Vec<String>,
    pub moduli_count: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fibers: Option<FibersJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductJson {
    pub first: String,
    pub second: String,
    pub caption: String,
    pub ambient: String,
    #[serde(with = "mat_num")]
    pub lattice_gram: Vec<Vec<Int>>,
    #[serde(with = "mat_num")]
    pub chow_matrix: Vec<Vec<Int>>,
    pub ambient_is_k3: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1Row {
    pub family: String,
    pub partner: String,
    pub partner_caption: String,
    pub partner_target_dim: u64,
    pub models: Vec<ModelJson>,
    pub products: Vec<ProductJson>,
    pub mismatches: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1Report {
    pub schema: String,
    pub kind: String,
    pub rows: Vec<Table1Row>,
    pub mismatches: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinctnessJson {
    pub other: String,
    /// `distinct_by_group`, `same_group_but_constraint` or `compatible`.
    pub verdict: String,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrespondReport {
    pub schema: String,
    pub kind: String,
    pub family: String,
    pub partner: String,
    pub involution: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub distinctness: Option<DistinctnessJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionJson {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub computed: Vec<String>,
    pub expected: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: String,
    pub kind: String,
    pub dmax: u64,
    pub criteria: Vec<CriterionJson>,
    pub passed: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use k3evenset_core::families::NsFamily;

    #[test]
    fn numbers_are_exact() {
        let big: Int = "123456789012345678901234567890".parse().unwrap();
        let r = ChowReport {
            schema: SCHEMA.into(),
            kind: "chow".into(),
            input: "x".into(),
            matrix: vec![vec![big.clone(), Int::from(-3)]],
            k3: true,
        };
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("[[123456789012345678901234567890,-3]]"), "{s}");
        assert_eq!(serde_json::from_str::<ChowReport>(&s).unwrap(), r);
    }

    #[test]
    fn lattice_roundtrip() {
        let l = NsFamily::l_prime(4).make().unwrap();
        let j = LatticeJson::new(&l);
        let text = serde_json::to_string(&j).unwrap();
        let back: LatticeJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
        let rebuilt = back.to_lattice().unwrap();
        assert_eq!(rebuilt.gram(), l.gram());
        assert!(rebuilt.same_points(&l).unwrap());
    }

    #[test]
    fn rationals_render_as_fractions() {
        assert_eq!(rat_string(&Rat::new(Int::from(3), Int::from(2))), "3/2");
        assert_eq!(rat_string(&Rat::from_integer(Int::from(4))), "4");
    }
}
