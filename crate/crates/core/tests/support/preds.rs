//! Random comparison predicates over the `v` field of a random flat
//! database, their COQL text, and a three-valued reference evaluator.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::Flat;

/// A comparison operand in a generated predicate.
#[derive(Debug, Clone)]
pub enum Opnd {
    V,
    /// `d<k>.v`
    Dv(usize),
    Const(i64),
}

#[derive(Debug, Clone)]
pub enum Pred {
    Cmp(Opnd, &'static str, Opnd),
    And(Box<Pred>, Box<Pred>),
    Or(Box<Pred>, Box<Pred>),
    Not(Box<Pred>),
}

pub fn gen_opnd(rng: &mut ChaCha8Rng, dims: usize) -> Opnd {
    match rng.gen_range(0..3) {
        0 => Opnd::V,
        1 if dims > 0 => Opnd::Dv(rng.gen_range(0..dims)),
        _ => Opnd::Const(rng.gen_range(-60..=110)),
    }
}

pub fn gen_pred(rng: &mut ChaCha8Rng, dims: usize, depth: u32) -> Pred {
    if depth == 0 || rng.gen_bool(0.4) {
        let ops = ["==", "!=", "<", "<=", ">", ">="];
        return Pred::Cmp(gen_opnd(rng, dims), ops[rng.gen_range(0..ops.len())], gen_opnd(rng, dims));
    }
    match rng.gen_range(0..3) {
        0 => Pred::And(Box::new(gen_pred(rng, dims, depth - 1)), Box::new(gen_pred(rng, dims, depth - 1))),
        1 => Pred::Or(Box::new(gen_pred(rng, dims, depth - 1)), Box::new(gen_pred(rng, dims, depth - 1))),
        _ => Pred::Not(Box::new(gen_pred(rng, dims, depth - 1))),
    }
}

pub fn opnd_text(o: &Opnd) -> String {
    match o {
        Opnd::V => "v".into(),
        Opnd::Dv(k) => format!("d{k}.v"),
        Opnd::Const(c) => c.to_string(),
    }
}

pub fn pred_text(p: &Pred) -> String {
    match p {
        Pred::Cmp(a, op, b) => format!("{} {op} {}", opnd_text(a), opnd_text(b)),
        Pred::And(a, b) => format!("({}) AND ({})", pred_text(a), pred_text(b)),
        Pred::Or(a, b) => format!("({}) OR ({})", pred_text(a), pred_text(b)),
        Pred::Not(a) => format!("NOT ({})", pred_text(a)),
    }
}

/// Three-valued evaluation, written independently of the engine.
pub fn oracle_pred(flat: &Flat, c: usize, id: i64, p: &Pred) -> Option<bool> {
    let row = flat.row(c, id);
    let val = |o: &Opnd| -> Option<i64> {
        match o {
            Opnd::V => row.v,
            Opnd::Dv(k) => {
                let target = flat.concepts[c].dims[*k].1;
                row.refs[*k].and_then(|t| flat.row(target, t).v)
            }
            Opnd::Const(x) => Some(*x),
        }
    };
    match p {
        Pred::Cmp(a, op, b) => {
            let (x, y) = (val(a)?, val(b)?);
            Some(match *op {
                "==" => x == y,
                "!=" => x != y,
                "<" => x < y,
                "<=" => x <= y,
                ">" => x > y,
                _ => x >= y,
            })
        }
        Pred::And(a, b) => match (oracle_pred(flat, c, id, a), oracle_pred(flat, c, id, b)) {
            (Some(false), _) | (_, Some(false)) => Some(false),
            (Some(true), Some(true)) => Some(true),
            _ => None,
        },
        Pred::Or(a, b) => match (oracle_pred(flat, c, id, a), oracle_pred(flat, c, id, b)) {
            (Some(true), _) | (_, Some(true)) => Some(true),
            (Some(false), Some(false)) => Some(false),
            _ => None,
        },
        Pred::Not(a) => oracle_pred(flat, c, id, a).map(|b| !b),
    }
}
