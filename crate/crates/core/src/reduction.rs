//! Translating verbose artificial terms into English kinship words.
//!
//! A [`ReductionDictionary`] maps concatenation chains of artificial blocks to
//! English words. [`ReductionDictionary::shorten`] is the greedy reducer: it
//! replaces the longest dictionary chain found anywhere on the term's spine
//! and recurses on what is left on either side.
//! [`ReductionDictionary::optimal_shorten`] searches every substitution order
//! instead and exists to measure how far greedy can miss.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::kin_term::{parse_kin_term, BasicKin, KinParseError, KinTerm};

const UNKNOWN_BLOCK: u32 = u32::MAX;

/// One piece of a reduced term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Segment {
    Word(String),
    /// A spine block no dictionary entry covered.
    Term(KinTerm),
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Segment::Word(w) => f.write_str(w),
            Segment::Term(t) => write!(f, "{t}"),
        }
    }
}

/// A mixed English/artificial term, in the same left-to-right order as the
/// spine it came from. `brother . father` renders as "brother of father".
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ReducedTerm {
    pub segments: Vec<Segment>,
}

impl ReducedTerm {
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Concatenations left after reduction.
    pub fn concat_count(&self) -> usize {
        self.segments.len().saturating_sub(1)
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.segments.iter().filter_map(|s| match s {
            Segment::Word(w) => Some(w.as_str()),
            Segment::Term(_) => None,
        })
    }
}

impl fmt::Display for ReducedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.segments.iter().enumerate() {
            if i > 0 {
                f.write_str(" of ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Half-open range `[start, end)` over the blocks of a spine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubtermWindow {
    pub start: usize,
    pub end: usize,
}

impl SubtermWindow {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DictError {
    #[error("line {line}: expected `<kin term> => <word>`")]
    Syntax { line: usize },
    #[error("line {line}: {source}")]
    Pattern { line: usize, source: KinParseError },
    #[error("line {line}: pattern for `{word}` uses inverse or dual")]
    IllegalPattern { line: usize, word: String },
    #[error("line {line}: `{word}` is not a usable kinship word")]
    BadWord { line: usize, word: String },
    #[error("line {line}: pattern for `{word}` already maps to `{existing}`")]
    DuplicatePattern {
        line: usize,
        word: String,
        existing: String,
    },
    #[error("line {line}: word `{word}` is defined twice")]
    DuplicateWord { line: usize, word: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("unknown kinship word `{0}`")]
    UnknownWord(String),
    #[error("cannot expand an empty reduced term")]
    Empty,
    #[error("search exceeded its budget of {budget} nodes")]
    OracleOverflow { budget: usize },
}

#[derive(Debug, Clone)]
struct Entry {
    pattern: KinTerm,
    word: String,
}

/// Ordered mapping from artificial chains to English words.
#[derive(Debug, Clone, Default)]
pub struct ReductionDictionary {
    entries: Vec<Entry>,
    block_ids: HashMap<KinTerm, u32>,
    by_chain: HashMap<Box<[u32]>, usize>,
    by_word: HashMap<String, usize>,
    max_len: usize,
}

/// Canonical form of a spine block: fork operands are flattened, sorted and
/// deduplicated, and concatenations are re-nested to the right.
pub fn canonical(term: &KinTerm) -> KinTerm {
    match term {
        KinTerm::Basic(_) => term.clone(),
        KinTerm::Concat(..) => {
            KinTerm::concat_all(term.spine().into_iter().map(canonical)).expect("non-empty spine")
        }
        KinTerm::Fork(..) => {
            let mut alts = Vec::new();
            collect_fork(term, &mut alts);
            let mut alts: Vec<KinTerm> = alts.into_iter().map(canonical).collect();
            alts.sort();
            alts.dedup();
            KinTerm::fork_all(alts).expect("non-empty fork")
        }
        KinTerm::Inverse(t) => KinTerm::inverse(canonical(t)),
        KinTerm::Dual(t) => KinTerm::dual(canonical(t)),
    }
}

fn collect_fork<'a>(term: &'a KinTerm, out: &mut Vec<&'a KinTerm>) {
    match term {
        KinTerm::Fork(a, b) => {
            collect_fork(a, out);
            collect_fork(b, out);
        }
        other => out.push(other),
    }
}

fn valid_word(word: &str) -> bool {
    !word.is_empty()
        && word
            .split('-')
            .all(|w| !w.is_empty() && w.chars().all(|c| c.is_ascii_alphabetic()))
        && BasicKin::from_name(word).is_none()
}

impl ReductionDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    /// The built-in English inventory.
    pub fn english() -> Self {
        include_str!("default.dict")
            .parse()
            .expect("built-in dictionary is well-formed")
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Longest pattern, in spine blocks.
    pub fn max_pattern_len(&self) -> usize {
        self.max_len
    }

    pub fn entries(&self) -> impl Iterator<Item = (&KinTerm, &str)> {
        self.entries.iter().map(|e| (&e.pattern, e.word.as_str()))
    }

    pub fn pattern(&self, word: &str) -> Option<&KinTerm> {
        self.by_word.get(word).map(|&i| &self.entries[i].pattern)
    }

    /// Adds an entry. `line` is only used for error messages.
    pub fn insert(&mut self, pattern: KinTerm, word: &str, line: usize) -> Result<(), DictError> {
        if pattern.contains_dual() || pattern.contains_inverse() {
            return Err(DictError::IllegalPattern {
                line,
                word: word.into(),
            });
        }
        if !valid_word(word) {
            return Err(DictError::BadWord {
                line,
                word: word.into(),
            });
        }
        if self.by_word.contains_key(word) {
            return Err(DictError::DuplicateWord {
                line,
                word: word.into(),
            });
        }
        let mut chain = Vec::new();
        for block in canonical(&pattern).spine() {
            let next = self.block_ids.len() as u32;
            chain.push(*self.block_ids.entry(block.clone()).or_insert(next));
        }
        let chain = chain.into_boxed_slice();
        if let Some(&i) = self.by_chain.get(&chain) {
            return Err(DictError::DuplicatePattern {
                line,
                word: word.into(),
                existing: self.entries[i].word.clone(),
            });
        }
        self.max_len = self.max_len.max(chain.len());
        let idx = self.entries.len();
        self.by_chain.insert(chain, idx);
        self.by_word.insert(word.into(), idx);
        self.entries.push(Entry {
            pattern,
            word: word.into(),
        });
        Ok(())
    }

    /// Canonical blocks of `term` and their dictionary ids.
    fn encode(&self, term: &KinTerm) -> (Vec<KinTerm>, Vec<u32>) {
        let blocks: Vec<KinTerm> = term
            .push_dual()
            .spine()
            .into_iter()
            .map(canonical)
            .collect();
        let ids = blocks
            .iter()
            .map(|b| self.block_ids.get(b).copied().unwrap_or(UNKNOWN_BLOCK))
            .collect();
        (blocks, ids)
    }

    fn lookup(&self, chain: &[u32]) -> Option<usize> {
        self.by_chain.get(chain).copied()
    }

    /// The longest spine window of `term` that is a dictionary pattern, with
    /// its word; the leftmost one among equally long candidates.
    pub fn longest_match(&self, term: &KinTerm) -> Option<(SubtermWindow, &str)> {
        let (_, ids) = self.encode(term);
        let table = MatchTable::new(self, &ids);
        table
            .longest(0, ids.len())
            .map(|(w, e)| (w, self.entries[e].word.as_str()))
    }

    /// Greedy reduction. Dual nodes are pushed down first; blocks containing
    /// an inverse never match and pass through unchanged.
    pub fn shorten(&self, term: &KinTerm) -> ReducedTerm {
        let (blocks, ids) = self.encode(term);
        let table = MatchTable::new(self, &ids);
        let mut segments = Vec::with_capacity(blocks.len());
        self.shorten_range(&table, &blocks, 0, blocks.len(), &mut segments);
        ReducedTerm { segments }
    }

    fn shorten_range(
        &self,
        table: &MatchTable,
        blocks: &[KinTerm],
        lo: usize,
        hi: usize,
        out: &mut Vec<Segment>,
    ) {
        match table.longest(lo, hi) {
            None => out.extend(blocks[lo..hi].iter().cloned().map(Segment::Term)),
            Some((w, entry)) => {
                self.shorten_range(table, blocks, lo, w.start, out);
                out.push(Segment::Word(self.entries[entry].word.clone()));
                self.shorten_range(table, blocks, w.end, hi, out);
            }
        }
    }

    /// Replaces every word by its pattern and concatenates the result.
    pub fn expand(&self, reduced: &ReducedTerm) -> Result<KinTerm, ReductionError> {
        let blocks = reduced
            .segments
            .iter()
            .map(|s| match s {
                Segment::Word(w) => self
                    .pattern(w)
                    .cloned()
                    .ok_or_else(|| ReductionError::UnknownWord(w.clone())),
                Segment::Term(t) => Ok(t.clone()),
            })
            .collect::<Result<Vec<_>, _>>()?;
        KinTerm::concat_all(blocks).ok_or(ReductionError::Empty)
    }

    /// Exhaustive depth-first search over all substitution orders, returning a
    /// reduction with the fewest segments. Fails once more than `budget`
    /// search nodes have been expanded.
    pub fn optimal_shorten(
        &self,
        term: &KinTerm,
        budget: usize,
    ) -> Result<ReducedTerm, ReductionError> {
        let (blocks, ids) = self.encode(term);
        let mut search = Search {
            dict: self,
            ids: &ids,
            budget,
            expanded: 0,
            seen: HashSet::new(),
            best: None,
        };
        let start: Vec<Slot> = (0..ids.len()).map(Slot::Block).collect();
        search.visit(start)?;
        let best = search.best.expect("the start state is always a candidate");
        let segments = best
            .into_iter()
            .map(|slot| match slot {
                Slot::Block(i) => Segment::Term(blocks[i].clone()),
                Slot::Word(entry, _) => Segment::Word(self.entries[entry].word.clone()),
            })
            .collect();
        Ok(ReducedTerm { segments })
    }
}

/// Dictionary entry for every (start, length) window of one spine, looked up
/// once. Windows longer than the longest pattern cannot match and are not
/// stored.
struct MatchTable {
    width: usize,
    cells: Vec<Option<usize>>,
}

impl MatchTable {
    fn new(dict: &ReductionDictionary, ids: &[u32]) -> Self {
        let width = dict.max_len;
        let mut cells = vec![None; ids.len() * width];
        for i in 0..ids.len() {
            for len in 1..=width.min(ids.len() - i) {
                cells[i * width + len - 1] = dict.lookup(&ids[i..i + len]);
            }
        }
        MatchTable { width, cells }
    }

    /// Longest match inside `[lo, hi)`, leftmost on ties.
    fn longest(&self, lo: usize, hi: usize) -> Option<(SubtermWindow, usize)> {
        let mut best: Option<(SubtermWindow, usize)> = None;
        for i in lo..hi {
            for len in (1..=self.width.min(hi - i)).rev() {
                if best.is_some_and(|(w, _)| len <= w.len()) {
                    break;
                }
                if let Some(entry) = self.cells[i * self.width + len - 1] {
                    best = Some((
                        SubtermWindow {
                            start: i,
                            end: i + len,
                        },
                        entry,
                    ));
                    break;
                }
            }
        }
        best
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Slot {
    /// Original spine block at this position.
    Block(usize),
    /// Dictionary entry replacing blocks starting at this position.
    Word(usize, usize),
}

struct Search<'a> {
    dict: &'a ReductionDictionary,
    ids: &'a [u32],
    budget: usize,
    expanded: usize,
    seen: HashSet<Vec<Slot>>,
    best: Option<Vec<Slot>>,
}

impl Search<'_> {
    fn visit(&mut self, state: Vec<Slot>) -> Result<(), ReductionError> {
        if !self.seen.insert(state.clone()) {
            return Ok(());
        }
        self.expanded += 1;
        if self.expanded > self.budget {
            return Err(ReductionError::OracleOverflow {
                budget: self.budget,
            });
        }
        let mut leaf = true;
        for i in 0..state.len() {
            let Slot::Block(first) = state[i] else {
                continue;
            };
            let run = state[i..]
                .iter()
                .take_while(|s| matches!(s, Slot::Block(_)))
                .count();
            for len in (1..=run.min(self.dict.max_len)).rev() {
                if let Some(entry) = self.dict.lookup(&self.ids[first..first + len]) {
                    leaf = false;
                    let mut next = Vec::with_capacity(state.len() - len + 1);
                    next.extend_from_slice(&state[..i]);
                    next.push(Slot::Word(entry, first));
                    next.extend_from_slice(&state[i + len..]);
                    self.visit(next)?;
                }
            }
        }
        if leaf && self.best.as_ref().is_none_or(|b| state.len() < b.len()) {
            self.best = Some(state);
        }
        Ok(())
    }
}

impl FromStr for ReductionDictionary {
    type Err = DictError;

    /// Parses lines of `<kin term> => <word>`. Blank lines and lines starting
    /// with `#` are ignored.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut dict = ReductionDictionary::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let (lhs, rhs) = content.split_once("=>").ok_or(DictError::Syntax { line })?;
            let pattern =
                parse_kin_term(lhs.trim()).map_err(|source| DictError::Pattern { line, source })?;
            dict.insert(pattern, rhs.trim(), line)?;
        }
        Ok(dict)
    }
}
