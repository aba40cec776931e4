//! Rectangle-term polynomials, their nonnegative shift, counting protocols
//! and the pipeline to bounded-error PP protocols.

pub mod fixtures;
pub mod pipeline;
pub mod polynomial;

pub use fixtures::{and_fixture, boundary_fixture, fixture, or2_fixture, FIXTURE_NAMES};
pub use pipeline::{member_protocols, pipeline, MemberReport, PipelineReport, RandomizedRectanglePolynomial};
pub use polynomial::{
    counting_to_guess, rectangle_protocol, shift_nonnegative, CountingPolynomial, CountingTerm, RectangleTerm,
    RectangleTermPolynomial,
};

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::Zero;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn and_has_no_error() {
        let (rphi, l) = and_fixture();
        let rep = pipeline(&rphi, &l).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures());
        assert_eq!(rep.max_error, "0");
        assert_eq!(rep.protocol.support()[0].0.accepted(), l);
    }

    #[test]
    fn or2_is_exact() {
        let (rphi, l) = or2_fixture();
        let rep = pipeline(&rphi, &l).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures());
        assert!(rep.error_grid.iter().all(|e| e == "0"));
        assert_eq!(rep.protocol.error(&l).unwrap(), BigRational::zero());
        assert_eq!(rep.protocol.support()[0].0.accepted(), l);
        assert_eq!(rphi.thresholds(), vec![BigInt::from(1)]);
        assert_eq!(l.count_ones(), 7);
        assert!(rep.members[0].klauck.as_ref().unwrap().lower_bound_holds);
    }

    #[test]
    fn boundary_passes_at_one_third() {
        let (rphi, l) = boundary_fixture();
        let rep = pipeline(&rphi, &l).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures());
        assert_eq!(rep.protocol.error(&l).unwrap(), r(1, 3));
        for (k, e) in rep.error_grid.iter().enumerate() {
            assert_eq!(e, if k < 12 { "1/3" } else { "0" }, "input {k}");
        }
    }

    #[test]
    fn too_noisy_fails_precondition() {
        let (rphi, l) = boundary_fixture();
        let mut support = rphi.support().to_vec();
        support[0].1 = r(1, 2);
        support[1].1 = r(1, 4);
        support[2].1 = r(1, 4);
        let noisy = RandomizedRectanglePolynomial::new(rphi.domain(), support).unwrap();
        let rep = pipeline(&noisy, &l).unwrap();
        assert!(!rep.passed());
        let names: Vec<String> = rep.failures().into_iter().map(|c| c.name).collect();
        assert_eq!(names, vec!["precondition", "error"]);
        assert!(rep.checks[0].detail.contains("(0,0) correct with probability 1/2"));
    }

    #[test]
    fn json_round_trip() {
        for name in FIXTURE_NAMES {
            let (rphi, _) = fixture(name).unwrap();
            let back = RandomizedRectanglePolynomial::from_json(&rphi.to_json(), None).unwrap();
            assert_eq!(back, rphi);
        }
        let v: serde_json::Value = serde_json::from_str(r#"{"support":[{"probability":"1","terms":[]}]}"#).unwrap();
        assert!(RandomizedRectanglePolynomial::from_json(&v, None).is_err());
        let d = crate::protocols::Domain::new(2, 2);
        let rp = RandomizedRectanglePolynomial::from_json(&v, Some(d)).unwrap();
        assert_eq!(rp.domain(), d);
    }
}
