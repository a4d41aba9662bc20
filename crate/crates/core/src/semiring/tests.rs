use proptest::prelude::*;

use super::*;

fn real_with_specials(lo: f64, hi: f64, specials: &'static [f64]) -> BoxedStrategy<f64> {
    prop_oneof![
        4 => lo..hi,
        1 => proptest::sample::select(specials),
    ]
    .boxed()
}

fn prob_value() -> BoxedStrategy<f64> {
    real_with_specials(0.0, 10.0, &[0.0, 1.0])
}

fn log_value() -> BoxedStrategy<f64> {
    real_with_specials(-20.0, 3.0, &[f64::NEG_INFINITY, 0.0])
}

fn fuzzy_value() -> BoxedStrategy<f64> {
    real_with_specials(0.0, 1.0, &[0.0, 1.0])
}

fn dual_value() -> BoxedStrategy<DualValue> {
    prop_oneof![
        4 => (0.0..5.0, -5.0..5.0).prop_map(|(p, t)| DualValue::new(p, t)),
        1 => proptest::sample::select(vec![DualValue::new(0.0, 0.0), DualValue::new(1.0, 0.0)]),
    ]
    .boxed()
}

fn poly_value() -> BoxedStrategy<SparsePolynomial> {
    let term = (-3i32..=3, 0u32..3, 0u32..3, 0u32..2);
    proptest::collection::vec(term, 0..4)
        .prop_map(|terms| {
            let mut p = SparsePolynomial::zero();
            for (c, a, b, d) in terms {
                let m = Monomial::from_powers([(1, a), (2, b), (3, d)]);
                p.add_in_place(&SparsePolynomial::term(m, c as f64));
            }
            p
        })
        .boxed()
}

/// Checks every semiring law on one triple.
fn check_laws<S: Semiring>(
    s: &S,
    a: &S::Value,
    b: &S::Value,
    c: &S::Value,
    eq: impl Fn(&S::Value, &S::Value) -> bool,
) -> Result<(), TestCaseError> {
    let (zero, one) = (s.zero(), s.one());
    prop_assert!(eq(&s.add(&s.add(a, b), c), &s.add(a, &s.add(b, c))), "add assoc");
    prop_assert!(eq(&s.mul(&s.mul(a, b), c), &s.mul(a, &s.mul(b, c))), "mul assoc");
    prop_assert!(eq(&s.add(a, b), &s.add(b, a)), "add comm");
    prop_assert!(eq(&s.mul(a, b), &s.mul(b, a)), "mul comm");
    prop_assert!(eq(&s.add(&zero, a), a), "add identity");
    prop_assert!(eq(&s.mul(&one, a), a), "mul identity");
    prop_assert!(eq(&s.mul(&zero, a), &zero), "absorption");
    prop_assert!(
        eq(&s.mul(&s.add(a, b), c), &s.add(&s.mul(a, c), &s.mul(b, c))),
        "distributivity"
    );

    let ab = s.mul(a, b);
    if let Some(r) = s.try_divide(&ab, a) {
        prop_assert!(eq(&s.mul(a, &r), &ab), "cancellation soundness");
    }
    match s.ordered_mul(a, b) {
        Some(Side::Left) => prop_assert_eq!(&ab, a, "ordered left"),
        Some(Side::Right) => prop_assert_eq!(&ab, b, "ordered right"),
        None => {}
    }
    if s.additively_idempotent() {
        prop_assert_eq!(&s.add(a, a), a, "idempotent add");
    }
    Ok(())
}

fn exact<V: PartialEq>(a: &V, b: &V) -> bool {
    a == b
}

fn rel9(a: &f64, b: &f64) -> bool {
    rel_close(*a, *b, 1e-9) || (a - b).abs() <= 1e-12
}

fn log9(a: &f64, b: &f64) -> bool {
    a == b || (a - b).abs() <= 1e-9
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn bool_laws(a: bool, b: bool, c: bool) {
        check_laws(&Bool, &a, &b, &c, exact)?;
        prop_assert!(Bool.ordered_mul(&a, &b).is_some());
    }

    #[test]
    fn gf2_laws(a: bool, b: bool, c: bool) {
        let (a, b, c) = (Gf2Value(a), Gf2Value(b), Gf2Value(c));
        check_laws(&Gf2, &a, &b, &c, exact)?;
        prop_assert!(Gf2.ordered_mul(&a, &b).is_some());
        // every nonzero element is cancellative
        prop_assert_eq!(Gf2.is_cancellative(&a), a.0);
    }

    #[test]
    fn nat_laws(a in 0u128..1000, b in 0u128..1000, c in 0u128..1000) {
        check_laws(&Nat, &a, &b, &c, exact)?;
    }

    #[test]
    fn prob_laws(a in prob_value(), b in prob_value(), c in prob_value()) {
        check_laws(&Prob, &a, &b, &c, rel9)?;
    }

    #[test]
    fn viterbi_laws(a in prob_value(), b in prob_value(), c in prob_value()) {
        check_laws(&Viterbi, &a, &b, &c, rel9)?;
    }

    #[test]
    fn log_laws(a in log_value(), b in log_value(), c in log_value()) {
        check_laws(&Log, &a, &b, &c, log9)?;
    }

    #[test]
    fn tropical_laws(a in log_value(), b in log_value(), c in log_value()) {
        check_laws(&Tropical, &a, &b, &c, log9)?;
    }

    #[test]
    fn fuzzy_laws(a in fuzzy_value(), b in fuzzy_value(), c in fuzzy_value()) {
        check_laws(&Fuzzy, &a, &b, &c, exact)?;
        prop_assert!(Fuzzy.ordered_mul(&a, &b).is_some());
    }

    #[test]
    fn grad_laws(a in dual_value(), b in dual_value(), c in dual_value()) {
        check_laws(&Grad, &a, &b, &c, |x, y| Grad.approx_eq(x, y) || (
            (x.primal - y.primal).abs() <= 1e-12 && (x.tangent - y.tangent).abs() <= 1e-12
        ))?;
    }

    #[test]
    fn sens_laws(a in poly_value(), b in poly_value(), c in poly_value()) {
        // small integer coefficients keep every operation exact
        check_laws(&Sens, &a, &b, &c, exact)?;
    }

    #[test]
    fn logaddexp_matches_direct_evaluation(a in -30.0f64..5.0, b in -30.0f64..5.0) {
        let direct = (a.exp() + b.exp()).ln();
        prop_assert!((logaddexp(a, b) - direct).abs() <= 1e-12 * direct.abs().max(1.0));
    }
}

#[test]
fn non_idempotent_semirings_show_it() {
    assert_ne!(Nat.add(&1, &1), 1);
    assert_ne!(Prob.add(&1.0, &1.0), 1.0);
    assert_ne!(Log.add(&0.0, &0.0), 0.0);
    assert_ne!(Gf2.add(&Gf2Value(true), &Gf2Value(true)), Gf2Value(true));
    assert_ne!(Grad.add(&Grad.one(), &Grad.one()), Grad.one());
    assert_ne!(Sens.add(&Sens.one(), &Sens.one()), Sens.one());
}

#[test]
fn make_semiring_flags() {
    for kind in SemiringKind::ALL {
        let expected = matches!(
            kind,
            SemiringKind::Nat
                | SemiringKind::Prob
                | SemiringKind::Log
                | SemiringKind::Grad
                | SemiringKind::Gf2
                | SemiringKind::Sens
        );
        assert_eq!(kind.needs_determinism(), expected, "{kind}");
        assert_eq!(kind.additively_idempotent(), !expected, "{kind}");
        assert_eq!(make_semiring(kind.name()).unwrap(), kind);
    }
}

#[test]
fn make_semiring_identities() {
    assert_eq!((Prob.zero(), Prob.one()), (0.0, 1.0));
    assert_eq!((Log.zero(), Log.one()), (f64::NEG_INFINITY, 0.0));
    assert_eq!(Log.add(&0.3f64.ln(), &0.14f64.ln()), logaddexp(0.3f64.ln(), 0.14f64.ln()));
    assert_eq!(Gf2.add(&Gf2Value(true), &Gf2Value(true)), Gf2Value(false));
    assert_eq!(Gf2.mul(&Gf2Value(true), &Gf2Value(false)), Gf2Value(false));
}

#[test]
fn unknown_semiring_names_valid_set() {
    let err = make_semiring("obdd").unwrap_err().to_string();
    assert!(err.contains("obdd"));
    for kind in SemiringKind::ALL {
        assert!(err.contains(kind.name()), "{err}");
    }
}

#[test]
fn logaddexp_examples() {
    assert_eq!(logaddexp(f64::NEG_INFINITY, -1.5), -1.5);
    assert_eq!(logaddexp(2.0, f64::NEG_INFINITY), 2.0);
    let got = logaddexp(0.3f64.ln(), 0.14f64.ln());
    assert!((got - 0.44f64.ln()).abs() <= 1e-12);
    assert!((logaddexp(0.0, 0.0) - 2f64.ln()).abs() <= 1e-15);
    assert!(logaddexp(f64::NAN, 0.0).is_nan());
}

#[test]
fn dual_examples() {
    let p = DualValue::new(0.37, -1.25);
    assert_eq!(Grad.mul(&Grad.one(), &p), p);

    let prod = Grad.mul(&DualValue::new(0.5, 1.0), &DualValue::new(0.8, 0.0));
    assert!((prod.primal - 0.4).abs() < 1e-15);
    assert!((prod.tangent - 0.8).abs() < 1e-15);
    // finite differences of f(p) = p * 0.8 at p = 0.5
    let h = 1e-6;
    let fd = ((0.5 + h) * 0.8 - (0.5 - h) * 0.8) / (2.0 * h);
    assert!((prod.tangent - fd).abs() < 1e-9);

    let sum = Grad.add(&DualValue::new(0.3, 0.1), &DualValue::new(0.14, 0.2));
    assert!((sum.primal - 0.44).abs() < 1e-15);
    assert!((sum.tangent - 0.3).abs() < 1e-15);
}

#[test]
fn dual_division_inverts_product() {
    let a = DualValue::new(0.7, 0.3);
    let c = DualValue::new(0.4, -2.0);
    let q = Grad.divide(&Grad.mul(&a, &c), &c);
    assert!(Grad.approx_eq(&q, &a));
    assert!(!Grad.is_cancellative(&DualValue::new(0.0, 1.0)));
}

#[test]
fn poly_examples() {
    let x = SparsePolynomial::var(1);
    let y = SparsePolynomial::var(2);
    let one = SparsePolynomial::constant(1.0);

    let got = x.mul(&one.add(&x.neg()));
    let want = x.add(&SparsePolynomial::term(Monomial::from_powers([(1, 2)]), -1.0));
    assert_eq!(got, want);
    assert_eq!(got.to_string(), "x1 - x1^2");

    assert_eq!(x.add(&y).mul(&one), x.add(&y));

    let xy = x.mul(&y);
    assert_eq!(xy, SparsePolynomial::term(Monomial::from_powers([(1, 1), (2, 1)]), 1.0));
    assert_eq!(xy.to_string(), "x1*x2");
}

#[test]
fn poly_is_canonical() {
    let x = SparsePolynomial::var(1);
    assert!(x.add(&x.neg()).is_zero());
    assert_eq!(x.add(&x.neg()), SparsePolynomial::zero());
}

#[test]
fn poly_text_round_trip() {
    let p = SparsePolynomial::parse("0.5 + 2*x1^2*x3 - x2").unwrap();
    assert_eq!(p.len(), 3);
    assert_eq!(SparsePolynomial::parse(&p.to_string()).unwrap(), p);
    assert_eq!(SparsePolynomial::parse("-1e-3*x4").unwrap().coefficient(&Monomial::var(4)), -1e-3);
}

#[test]
fn poly_division_by_monomials_only() {
    let x = SparsePolynomial::var(1);
    let y = SparsePolynomial::var(2);
    let two_x = SparsePolynomial::term(Monomial::var(1), 2.0);
    let p = two_x.mul(&y.add(&Sens.one()));
    assert_eq!(Sens.try_divide(&p, &two_x), Some(y.add(&Sens.one())));
    assert_eq!(Sens.try_divide(&p, &x.add(&y)), None);
    assert_eq!(Sens.try_divide(&y, &x), None);
}

#[test]
fn sens_default_labels() {
    assert_eq!(Sens.default_label(Literal::pos(3)).to_string(), "x3");
    assert_eq!(Sens.default_label(Literal::neg(3)).to_string(), "1 - x3");
}

#[test]
fn cancellation_rules() {
    assert_eq!(Prob.try_divide(&0.3, &0.0), None);
    assert_eq!(Prob.try_divide(&0.3, &0.5), Some(0.6));
    assert_eq!(Nat.try_divide(&30, &0), None);
    assert_eq!(Nat.try_divide(&30, &4), None);
    assert_eq!(Nat.try_divide(&30, &5), Some(6));
    assert_eq!(Gf2.try_divide(&Gf2Value(true), &Gf2Value(false)), None);
    assert_eq!(Log.try_divide(&-1.0, &f64::NEG_INFINITY), None);
    assert!(!Fuzzy.has_division());
}

#[test]
fn values_format_and_parse() {
    assert_eq!(Bool.format_value(&true), "T");
    assert_eq!(Log.format_value(&f64::NEG_INFINITY), "log:-inf");
    assert_eq!(Log.parse_value("log:-inf").unwrap(), f64::NEG_INFINITY);
    assert_eq!(Log.parse_value("0.5").unwrap(), 0.5f64.ln());
    assert_eq!(Grad.parse_value("(0.5,1)").unwrap(), DualValue::new(0.5, 1.0));
    assert_eq!(Grad.format_value(&DualValue::new(0.5, 1.0)), "(0.5,1)");
    assert!(Fuzzy.from_weight(1.5).is_err());
    assert!(Nat.from_weight(0.5).is_err());
    assert_eq!(Nat.parse_value("12").unwrap(), 12);
    let p = 0.1 * 3.0;
    assert_eq!(Prob.parse_value(&Prob.format_value(&p)).unwrap(), p);
}
