//! End-to-end certificates: construction for `(g, p)`, JSON layout and an
//! independent verifier.

mod construct;
mod schema;
mod verify;

pub use construct::{construct_certificate, ConstructConfig, ASSUMPTIONS, EXCEPTIONAL_REASON, SPLIT_SEARCH_LIMIT};
pub use schema::*;
pub use verify::{verify_certificate, verify_json, VerificationReport, RECHECK_SPLIT_LIMIT};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::CertificateError;

    fn failing_check(cert: &Certificate) -> Option<String> {
        match verify_certificate(cert) {
            Ok(_) => None,
            Err(CertificateError::CheckFailed { check, .. }) => Some(check),
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn round_trip_2_5() {
        let cert = construct_certificate(2, 5, &ConstructConfig::default()).unwrap();
        let json = cert.to_json().unwrap();
        let report = verify_json(&json).unwrap();
        assert!(report.passed.contains(&"lifts".to_string()));
        let w = cert.witness.as_ref().unwrap();
        assert_eq!((w.d, w.q), (Dec(2), Dec(13)));
        assert!(json.contains("\"schema\": 1"));
    }

    #[test]
    fn deterministic_output() {
        let a = construct_certificate(2, 7, &ConstructConfig::default()).unwrap().to_json().unwrap();
        let b = construct_certificate(2, 7, &ConstructConfig::default()).unwrap().to_json().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mutations_are_caught() {
        let cert = construct_certificate(2, 5, &ConstructConfig::default()).unwrap();
        let mut bad_x = cert.clone();
        let g = bad_x.group.as_mut().unwrap();
        g.x[0][0] = (g.x[0][0] + 1) % 5;
        assert_eq!(failing_check(&bad_x).as_deref(), Some("presentation"));

        let mut bad_n1 = cert.clone();
        // 5 is a square mod 11, violating the non-residue condition
        bad_n1.embedding.as_mut().unwrap().n1 = Dec(11);
        assert_eq!(failing_check(&bad_n1).as_deref(), Some("instance"));

        let mut bad_l = cert.clone();
        bad_l.auxiliary.as_mut().unwrap().l = Dec(53);
        assert_eq!(failing_check(&bad_l).as_deref(), Some("auxiliary"));
    }

    #[test]
    fn exceptional_and_input_errors() {
        let cert = construct_certificate(2, 2, &ConstructConfig::default()).unwrap();
        assert_eq!(cert.kind, CertificateKind::Exceptional);
        verify_certificate(&cert).unwrap();
        assert!(matches!(construct_certificate(1, 5, &ConstructConfig::default()), Err(CertificateError::Input(_))));
        assert!(matches!(construct_certificate(2, 9, &ConstructConfig::default()), Err(CertificateError::Input(_))));
    }

    #[test]
    fn schema_violations() {
        assert!(matches!(verify_json("{\"schema\": 1}"), Err(CertificateError::Schema(_))));
        let cert = construct_certificate(2, 2, &ConstructConfig::default()).unwrap();
        let json = cert.to_json().unwrap().replace("\"g\": \"2\"", "\"g\": 2");
        assert!(matches!(verify_json(&json), Err(CertificateError::Schema(_))));
    }
}
