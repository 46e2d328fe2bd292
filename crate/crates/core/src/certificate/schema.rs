//! Serialized certificate layout. Integers are decimal strings; matrices are
//! row-major arrays of entries in `[0, p)`.

use crate::metacyclic::WordElement;
use num_bigint::BigUint;
use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

pub const SCHEMA_VERSION: u32 = 1;

/// A machine integer written as a decimal string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dec(pub u64);

impl Serialize for Dec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Dec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(D::Error::custom(format!("not a decimal integer: {s:?}")));
        }
        s.parse().map(Dec).map_err(D::Error::custom)
    }
}

impl fmt::Display for Dec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for Dec {
    fn from(v: u64) -> Self {
        Dec(v)
    }
}

impl From<u32> for Dec {
    fn from(v: u32) -> Self {
        Dec(v as u64)
    }
}

/// A word `x^a y^b` as `[a, b]`.
pub type Word = [Dec; 2];

pub fn word(w: &WordElement) -> Word {
    [Dec(w.a), Dec(w.b)]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Standard,
    Special33,
    Exceptional,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputBlock {
    pub g: Dec,
    pub p: Dec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KgBlock {
    #[serde(with = "crate::kg::decimal")]
    pub value: BigUint,
    /// prime → exponent
    pub factors: BTreeMap<Dec, Dec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessBlock {
    pub d: Dec,
    pub q: Dec,
    pub prime: Dec,
    pub exponent: Dec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictBlock {
    pub d: Dec,
    pub prime: Dec,
    pub exponent: Dec,
    pub kg_exponent: Dec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalBlock {
    pub reason: String,
    /// Every prime power `r^k ∥ p^d + 1`, `d ≤ g`; each divides `K_g`.
    pub verdicts: Vec<VerdictBlock>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeBlock {
    pub e: Dec,
    pub period: Dec,
    pub action: Dec,
    pub carry: Dec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldBlock {
    /// Defining polynomial of `F_{p^d}`, lowest degree first.
    pub k_modulus: Vec<Dec>,
    /// `η² + c_1 η + c_0` with `c_i ∈ F_{p^d}`; empty when unused.
    pub eta_min_poly: Vec<Vec<Dec>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptBlock {
    pub relations: Vec<String>,
    pub order_x: Dec,
    pub order_y: Dec,
    pub group_order: Dec,
    pub similitude_x: Dec,
    pub similitude_y: Dec,
    pub similitude_surjective: bool,
    pub derived_order: Dec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupBlock {
    pub shape: ShapeBlock,
    pub field: FieldBlock,
    pub form: Vec<Vec<u64>>,
    pub x: Vec<Vec<u64>>,
    pub y: Vec<Vec<u64>>,
    pub transcript: TranscriptBlock,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingBlock {
    pub splits: bool,
    /// Commuting lifts `(u, w)` of the generators of `N^ab`, when split.
    pub witness: Option<[Word; 2]>,
    pub exhaustive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusBlock {
    pub at_p: Dec,
    pub at_n1: Dec,
    pub at_n2: Option<[Dec; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingBlock {
    pub n: Dec,
    pub d1: Dec,
    pub n1: Dec,
    pub n2: Option<Dec>,
    pub alpha_n2: Option<Dec>,
    pub frobenius: FrobeniusBlock,
    pub at_infinity: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftBlock {
    pub place: crate::obstructions::LocalPlace,
    pub sigma: Word,
    pub tau: Word,
    pub exponent: Dec,
    pub modulus: Dec,
    pub twist: Dec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelmerBlock {
    pub m: Dec,
    pub with_2_condition: bool,
    pub order: Dec,
    pub h1_order: Dec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstraintBlock {
    CongruentOne { modulus: Dec },
    PowerResidue { prime: Dec, degree: Dec },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxiliaryBlock {
    /// How the field `F` cut out by `N^ab` was chosen.
    pub field_note: String,
    pub constraints: Vec<ConstraintBlock>,
    pub v: Dec,
    pub l: Dec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistBlock {
    pub l: Dec,
    pub q: Dec,
    pub c_sigma: Word,
    pub c_tau: Word,
    pub order: Dec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: u32,
    pub kind: CertificateKind,
    pub input: InputBlock,
    pub kg: KgBlock,
    pub witness: Option<WitnessBlock>,
    pub exceptional: Option<ExceptionalBlock>,
    pub group: Option<GroupBlock>,
    pub splitting: Option<SplittingBlock>,
    pub embedding: Option<EmbeddingBlock>,
    pub lifts: Vec<LiftBlock>,
    pub selmer: Vec<SelmerBlock>,
    pub auxiliary: Option<AuxiliaryBlock>,
    pub twist: Option<TwistBlock>,
    pub inertia_generator: Option<Word>,
    pub assumptions: Vec<String>,
}

impl Certificate {
    pub fn to_json(&self) -> Result<String, serde_json::Error> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}
