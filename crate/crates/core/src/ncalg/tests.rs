use super::presets::{self, x, y, z};
use super::*;
use crate::scalar::{Exact, Numeric, Scalar};

fn q(e: i64) -> Scalar {
    Scalar::q_pow(e)
}

fn zalg() -> Arc<Algebra<Scalar>> {
    presets::disk_algebra(&Exact).unwrap()
}

fn el(alg: &Arc<Algebra<Scalar>>, w: &[Gen]) -> NcElement<Scalar> {
    NcElement::from_word(alg, Scalar::one(), w)
}

#[test]
fn disk_relation() {
    let a = zalg();
    let lhs = el(&a, &[z::ZS, z::Z]);
    let rhs = el(&a, &[z::Z, z::ZS])
        .scale(&q(2))
        .add(&NcElement::constant(&a, Scalar::one_minus_q_pow(2)));
    assert_eq!(lhs, rhs);
    assert_eq!(el(&a, &[z::Z, z::ZS]).len(), 1);
}

#[test]
fn two_step_reordering() {
    let a = zalg();
    let lhs = el(&a, &[z::ZS, z::ZS]).mul(&el(&a, &[z::Z]));
    let rhs = el(&a, &[z::Z, z::ZS, z::ZS])
        .scale(&q(4))
        .add(&el(&a, &[z::ZS]).scale(&Scalar::one_minus_q_pow(4)));
    assert_eq!(lhs, rhs);
    assert_eq!(lhs.to_string(), "q^4 * z zs^2 + (1 - q^4) * zs");
}

#[test]
fn backward_rule_rejected() {
    let mut p = presets::disk_presentation(&Exact);
    // z zs -> q^-2 (zs z - (1 - q^2))
    p.rules = vec![Rule {
        left: z::Z,
        right: z::ZS,
        terms: vec![
            (q(-2), vec![z::ZS, z::Z]),
            (q(-2).mul(&Scalar::one_minus_q_pow(2)).neg(), vec![]),
        ],
    }];
    assert!(matches!(Algebra::define(p), Err(AlgebraError::BackwardRule(_))));
}

#[test]
fn growing_rule_rejected() {
    let mut p = presets::disk_presentation(&Exact);
    p.rules[0].terms.push((Scalar::one(), vec![z::Z, z::Z, z::ZS]));
    assert!(matches!(Algebra::define(p), Err(AlgebraError::NotDecreasing(_))));
}

#[test]
fn star_inconsistent_rule_rejected() {
    let mut p = presets::x_presentation(&Exact);
    // X1 X2 = q X2 X1 together with X1s X2s = q X2s X1s contradicts the star
    p.rules[4].terms[0].0 = q(1);
    assert!(matches!(Algebra::define(p), Err(AlgebraError::StarInconsistent(_))));
}

#[test]
fn derived_adjoint_relations() {
    let xa = presets::x_algebra(&Exact).unwrap();
    // X2s X1 = q X1 X2s
    assert_eq!(el(&xa, &[x::X2S, x::X1]), el(&xa, &[x::X1, x::X2S]).scale(&q(1)));
    let ya = presets::y_algebra(&Exact).unwrap();
    let one = NcElement::one(&ya);
    let y1y1s = el(&ya, &[y::Y1, y::Y1S]);
    assert_eq!(el(&ya, &[y::Y2, y::Y2S]), one.sub(&y1y1s));
    assert_eq!(el(&ya, &[y::Y2S, y::Y2]), one.sub(&y1y1s.scale(&q(2))));
    // Y2 Y1 Y2s: pass Y1 then contract
    let lhs = el(&ya, &[y::Y2, y::Y1, y::Y2S]);
    let rhs = el(&ya, &[y::Y1]).sub(&el(&ya, &[y::Y1, y::Y1, y::Y1S])).scale(&q(-1));
    assert_eq!(lhs, rhs);
}

#[test]
fn star_examples() {
    let a = zalg();
    assert_eq!(el(&a, &[z::Z]).star(), el(&a, &[z::ZS]));
    let x = el(&a, &[z::Z, z::ZS]).scale(&q(1));
    assert_eq!(x.star(), x);
    let w = el(&a, &[z::Z, z::Z, z::ZS]);
    assert_eq!(w.star().star(), w);
}

#[test]
fn multiplication_associates_and_star_reverses() {
    let ya = presets::y_algebra(&Exact).unwrap();
    let a = el(&ya, &[y::Y2S, y::Y1]).add(&el(&ya, &[y::Y2]));
    let b = el(&ya, &[y::Y1S, y::Y2, y::Y2S]);
    let c = el(&ya, &[y::Y2S, y::Y2S]).sub(&NcElement::one(&ya));
    assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    assert_eq!(a.mul(&b).star(), b.star().mul(&a.star()));
}

#[test]
fn strategies_agree_on_sample_words() {
    let xa = presets::x_algebra(&Exact).unwrap();
    let w = [x::X1S, x::X1, x::X2S, x::X1S, x::X2, x::X1];
    let memo = xa.normal_order(&w);
    assert_eq!(memo, xa.normal_order_with(&w, Strategy::Leftmost));
    assert_eq!(memo, xa.normal_order_with(&w, Strategy::Rightmost));
}

#[test]
fn mismatched_algebras() {
    let a = zalg();
    let b = zalg();
    let e = NcElement::one(&a).try_add(&NcElement::one(&b));
    assert!(matches!(e, Err(AlgebraError::AlgebraMismatch(..))));
}

#[test]
fn sigma_on_y() {
    let ya = presets::y_algebra(&Exact).unwrap();
    let g = |n: &str| NcElement::generator(&ya, n).unwrap();
    let sigma = AntiAutomorphism::new(&ya, vec![g("Y2s"), g("Y1"), g("Y1s"), g("Y2")]).unwrap();
    assert_eq!(sigma.apply(&g("Y2")).unwrap(), g("Y2s"));
    assert_eq!(sigma.apply(&g("Y1").mul(&g("Y2"))).unwrap(), g("Y2s").mul(&g("Y1")));
    // the identity on generators does not reverse Y1 Y2 = q Y2 Y1 consistently
    let bad = AntiAutomorphism::new(&ya, vec![g("Y2"), g("Y1"), g("Y1s"), g("Y2s")]);
    assert!(bad.is_err());
}

#[test]
fn tensor_products_are_factorwise() {
    let a = zalg();
    let b = zalg();
    let zt = TensorElement::pure(&el(&a, &[z::Z]), &NcElement::one(&b));
    let yt = TensorElement::pure(&NcElement::one(&a), &el(&b, &[z::ZS]));
    assert_eq!(zt.mul(&yt), TensorElement::pure(&el(&a, &[z::Z]), &el(&b, &[z::ZS])));
    assert_eq!(
        zt.mul(&yt).star(),
        TensorElement::pure(&el(&a, &[z::ZS]), &el(&b, &[z::Z]))
    );
}

#[test]
fn numeric_backend_matches_exact() {
    let base = Numeric::new(0.5).unwrap();
    let fa = presets::x_algebra(&base).unwrap();
    let ea = presets::x_algebra(&Exact).unwrap();
    let w = [x::X1S, x::X2S, x::X1, x::X2];
    let exact = ea.normal_order(&w);
    let float = fa.normal_order(&w);
    assert_eq!(exact.len(), float.len());
    for (k, v) in exact {
        let f = float[&k];
        assert!((v.eval(0.5).unwrap() - f).abs() < 1e-12);
    }
}
