//! The three algebras used throughout: the quantum disk `Z` and the algebras `X`, `Y`
//! of the addition formula.

use std::sync::Arc;

use super::{Algebra, AlgebraError, Contraction, Presentation, Rule};
use crate::scalar::{Coeff, QBase, QExp};

pub mod z {
    pub const Z: u8 = 0;
    pub const ZS: u8 = 1;
}

pub mod x {
    pub const X2: u8 = 0;
    pub const X2S: u8 = 1;
    pub const X1: u8 = 2;
    pub const X1S: u8 = 3;
}

pub mod y {
    pub const Y2: u8 = 0;
    pub const Y1: u8 = 1;
    pub const Y1S: u8 = 2;
    pub const Y2S: u8 = 3;
}

fn qp<B: QBase>(base: &B, e: i64) -> B::C {
    base.q_pow(QExp::Int(e))
}

fn rule<C>(left: u8, right: u8, terms: Vec<(C, Vec<u8>)>) -> Rule<C> {
    Rule { left, right, terms }
}

pub fn disk_presentation<B: QBase>(base: &B) -> Presentation<B::C> {
    use z::*;
    Presentation {
        name: "Z".into(),
        generators: vec!["z".into(), "zs".into()],
        star: vec![ZS, Z],
        weights: vec![1, 1],
        rules: vec![rule(
            ZS,
            Z,
            vec![(qp(base, 2), vec![Z, ZS]), (base.one_minus_q_pow(QExp::Int(2)), vec![])],
        )],
        contractions: vec![],
    }
}

pub fn x_presentation<B: QBase>(base: &B) -> Presentation<B::C> {
    use x::*;
    let one_minus_q2 = base.one_minus_q_pow(QExp::Int(2));
    Presentation {
        name: "X".into(),
        generators: vec!["X2".into(), "X2s".into(), "X1".into(), "X1s".into()],
        star: vec![X2S, X2, X1S, X1],
        weights: vec![1, 1, 2, 2],
        rules: vec![
            rule(
                X2S,
                X2,
                vec![(qp(base, 2), vec![X2, X2S]), (one_minus_q2.clone(), vec![])],
            ),
            rule(X1, X2, vec![(qp(base, 1), vec![X2, X1])]),
            rule(X1S, X2, vec![(qp(base, 1), vec![X2, X1S])]),
            rule(X1, X2S, vec![(qp(base, -1), vec![X2S, X1])]),
            rule(X1S, X2S, vec![(qp(base, -1), vec![X2S, X1S])]),
            rule(
                X1S,
                X1,
                vec![
                    (qp(base, 2), vec![X1, X1S]),
                    (one_minus_q2.clone(), vec![]),
                    (one_minus_q2.neg(), vec![X2, X2S]),
                ],
            ),
        ],
        contractions: vec![],
    }
}

pub fn y_presentation<B: QBase>(base: &B) -> Presentation<B::C> {
    use y::*;
    Presentation {
        name: "Y".into(),
        generators: vec!["Y2".into(), "Y1".into(), "Y1s".into(), "Y2s".into()],
        star: vec![Y2S, Y1S, Y1, Y2],
        weights: vec![2, 1, 1, 2],
        rules: vec![
            rule(Y1, Y2, vec![(qp(base, 1), vec![Y2, Y1])]),
            rule(Y1S, Y2, vec![(qp(base, 1), vec![Y2, Y1S])]),
            rule(Y2S, Y2, vec![(B::C::one(), vec![]), (qp(base, 2).neg(), vec![Y1, Y1S])]),
            rule(Y1S, Y1, vec![(B::C::one(), vec![Y1, Y1S])]),
            rule(Y2S, Y1, vec![(qp(base, 1), vec![Y1, Y2S])]),
            rule(Y2S, Y1S, vec![(qp(base, 1), vec![Y1S, Y2S])]),
        ],
        contractions: vec![Contraction {
            first: Y2,
            last: Y2S,
            terms: vec![(B::C::one(), vec![]), (B::C::one().neg(), vec![Y1, Y1S])],
        }],
    }
}

pub fn disk_algebra<B: QBase>(base: &B) -> Result<Arc<Algebra<B::C>>, AlgebraError> {
    Algebra::define(disk_presentation(base))
}

pub fn x_algebra<B: QBase>(base: &B) -> Result<Arc<Algebra<B::C>>, AlgebraError> {
    Algebra::define(x_presentation(base))
}

pub fn y_algebra<B: QBase>(base: &B) -> Result<Arc<Algebra<B::C>>, AlgebraError> {
    Algebra::define(y_presentation(base))
}
