//! Bulk evaluation over every person of a tree or over many terms.
//!
//! The top-level functions run on rayon when the `parallel` feature is on and
//! fall back to the [`seq`] versions otherwise. Both variants are always
//! reachable by path so they can be benchmarked against each other.

use crate::family::{PersonIdx, TraditionalTree};
use crate::kin_term::KinTerm;
use crate::reduction::{ReducedTerm, ReductionDictionary};
use crate::semantics::PersonSet;

pub mod seq {
    use super::*;
    use crate::semantics::{eval_term, singleton};

    pub fn filter_persons<F>(tree: &TraditionalTree, pred: F) -> PersonSet
    where
        F: Fn(PersonIdx) -> bool + Sync,
    {
        tree.indices().filter(|&p| pred(p)).collect()
    }

    pub fn eval_from_each(tree: &TraditionalTree, term: &KinTerm) -> Vec<PersonSet> {
        tree.indices()
            .map(|p| eval_term(tree, term, &singleton(p)))
            .collect()
    }

    pub fn semantically_equal(tree: &TraditionalTree, a: &KinTerm, b: &KinTerm) -> bool {
        tree.indices().all(|p| {
            let s = singleton(p);
            eval_term(tree, a, &s) == eval_term(tree, b, &s)
        })
    }

    pub fn shorten_all(dict: &ReductionDictionary, terms: &[KinTerm]) -> Vec<ReducedTerm> {
        terms.iter().map(|t| dict.shorten(t)).collect()
    }
}

#[cfg(feature = "parallel")]
pub mod par {
    use rayon::prelude::*;

    use super::*;
    use crate::semantics::{eval_term, singleton};

    pub fn filter_persons<F>(tree: &TraditionalTree, pred: F) -> PersonSet
    where
        F: Fn(PersonIdx) -> bool + Sync,
    {
        let hits: Vec<PersonIdx> = (0..tree.len())
            .into_par_iter()
            .map(PersonIdx)
            .filter(|&p| pred(p))
            .collect();
        hits.into_iter().collect()
    }

    pub fn eval_from_each(tree: &TraditionalTree, term: &KinTerm) -> Vec<PersonSet> {
        (0..tree.len())
            .into_par_iter()
            .map(|i| eval_term(tree, term, &singleton(PersonIdx(i))))
            .collect()
    }

    pub fn semantically_equal(tree: &TraditionalTree, a: &KinTerm, b: &KinTerm) -> bool {
        (0..tree.len()).into_par_iter().all(|i| {
            let s = singleton(PersonIdx(i));
            eval_term(tree, a, &s) == eval_term(tree, b, &s)
        })
    }

    pub fn shorten_all(dict: &ReductionDictionary, terms: &[KinTerm]) -> Vec<ReducedTerm> {
        terms.par_iter().map(|t| dict.shorten(t)).collect()
    }
}

#[cfg(feature = "parallel")]
use par as imp;
#[cfg(not(feature = "parallel"))]
use seq as imp;

/// Persons satisfying `pred`.
pub fn filter_persons<F>(tree: &TraditionalTree, pred: F) -> PersonSet
where
    F: Fn(PersonIdx) -> bool + Sync,
{
    imp::filter_persons(tree, pred)
}

/// The image of every singleton, indexed by person.
pub fn eval_from_each(tree: &TraditionalTree, term: &KinTerm) -> Vec<PersonSet> {
    imp::eval_from_each(tree, term)
}

/// Whether two terms denote the same function on `tree`. Checking singletons
/// suffices because every denotation distributes over union.
pub fn semantically_equal(tree: &TraditionalTree, a: &KinTerm, b: &KinTerm) -> bool {
    imp::semantically_equal(tree, a, b)
}

pub fn shorten_all(dict: &ReductionDictionary, terms: &[KinTerm]) -> Vec<ReducedTerm> {
    imp::shorten_all(dict, terms)
}
