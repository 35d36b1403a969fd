//! Kinship terms as functions on sets of persons.
//!
//! A basic atom is lifted pointwise to sets, concatenation is composition
//! (the right operand applies first), fork is union, inverse is the preimage
//! and dual swaps the sex of every atom underneath it.

use std::collections::BTreeSet;

use crate::batch;
use crate::family::{PersonIdx, TraditionalTree};
use crate::kin_term::KinTerm;

pub type PersonSet = BTreeSet<PersonIdx>;

pub fn singleton(p: PersonIdx) -> PersonSet {
    BTreeSet::from([p])
}

/// Denotation of `term` applied to `input`.
///
/// Inverse is evaluated through the converse relation rather than by scanning
/// every person; [`eval_inverse_oracle`] is the scan.
pub fn eval_term(tree: &TraditionalTree, term: &KinTerm, input: &PersonSet) -> PersonSet {
    eval(tree, term, input, false, false)
}

fn eval(
    tree: &TraditionalTree,
    term: &KinTerm,
    input: &PersonSet,
    flip: bool,
    converse: bool,
) -> PersonSet {
    if input.is_empty() {
        return PersonSet::new();
    }
    match term {
        KinTerm::Basic(k) => {
            let k = if flip { k.opposite() } else { *k };
            if converse {
                input
                    .iter()
                    .flat_map(|&p| tree.basic_kin_converse(k, p))
                    .collect()
            } else {
                input.iter().flat_map(|&p| tree.basic_kin(k, p)).collect()
            }
        }
        KinTerm::Concat(outer, inner) => {
            // (a . b)^-1 = b^-1 . a^-1
            let (first, second) = if converse {
                (outer, inner)
            } else {
                (inner, outer)
            };
            let mid = eval(tree, first, input, flip, converse);
            eval(tree, second, &mid, flip, converse)
        }
        KinTerm::Fork(a, b) => {
            let mut out = eval(tree, a, input, flip, converse);
            out.extend(eval(tree, b, input, flip, converse));
            out
        }
        KinTerm::Inverse(t) => eval(tree, t, input, flip, !converse),
        KinTerm::Dual(t) => eval(tree, t, input, !flip, converse),
    }
}

/// Reference semantics for `term^-1`: every `v` whose image under `term`
/// meets `input`. Costs one evaluation of `term` per person in the tree.
pub fn eval_inverse_oracle(tree: &TraditionalTree, term: &KinTerm, input: &PersonSet) -> PersonSet {
    if input.is_empty() {
        return PersonSet::new();
    }
    batch::filter_persons(tree, |v| {
        eval_term(tree, term, &singleton(v))
            .iter()
            .any(|u| input.contains(u))
    })
}
