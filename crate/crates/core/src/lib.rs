pub mod arith;
pub mod error;
pub mod fp_matrix;
pub mod fp_poly;
pub mod symplectic;
pub mod tower;
pub mod normalizer;
pub mod metacyclic;
pub mod kg;
pub mod witness;
pub mod obstructions;
pub mod selmer;
pub mod certificate;

pub use certificate::{construct_certificate, verify_certificate, verify_json, Certificate, CertificateKind, ConstructConfig};
pub use error::{
    CertificateError, CohomologyError, GroupError, KgError, ObstructionError, SymplecticError, TowerError, WitnessError,
};
pub use fp_matrix::FpMatrix;
pub use kg::{kg_exact, kg_sampled, kg_stability, KgFactorization};
pub use metacyclic::{GroupShape, WordElement};
pub use normalizer::NormalizerData;
pub use obstructions::{obstruction_report, EmbeddingInstance, LocalPlace, ObstructionOutcome, TameLift};
pub use selmer::{selmer_dim, selmer_report, special_class_check, SelmerReport, UnitGroup};
pub use symplectic::{GramForm, SympMatrix};
pub use tower::{FieldTower, TowerElement};
pub use witness::{build_33_group, exceptional_scan, find_witness, zsigmondy_scan, Witness, WitnessOutcome};
