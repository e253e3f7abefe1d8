//! Full reduction modulo a relation set.

use crate::error::Result;
use crate::gsb::RelationSet;
use crate::liepoly::{LiePoly, Scalar};
use crate::words::Word;

/// One rewrite `f ← f − coefficient · [prefix·s̄·suffix]_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationStep {
    pub word: Word,
    /// Index into `S.relations()`.
    pub relation: usize,
    pub prefix: Word,
    pub suffix: Word,
    pub coefficient: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub remainder: LiePoly,
    pub steps: Vec<EliminationStep>,
}

pub fn reduce(f: &LiePoly, s: &RelationSet) -> Result<LiePoly> {
    reduce_traced(f, s).map(|r| r.remainder)
}

/// Eliminates the greatest reducible word first, at its leftmost occurrence
/// of a leading word, using the first matching relation there.
pub fn reduce_traced(f: &LiePoly, s: &RelationSet) -> Result<Reduction> {
    let mut rest = f.clone();
    let mut remainder = LiePoly::zero();
    let mut steps = Vec::new();
    while let Some((u, c)) = rest.leading() {
        let (u, c) = (u.clone(), c.clone());
        match s.find_reducer(&u) {
            None => {
                rest.remove(&u);
                remainder.add_term(u, c);
            }
            Some((idx, pos)) => {
                let r = s.relative_relation(idx, &u, pos)?;
                let k = &c / &r.coeff(&u);
                rest.add_scaled(&r, &-&k);
                let lead_len = s.relations()[idx].lead.len();
                steps.push(EliminationStep {
                    prefix: u.prefix(pos),
                    suffix: u.suffix_from(pos + lead_len),
                    word: u,
                    relation: idx,
                    coefficient: k,
                });
            }
        }
    }
    Ok(Reduction { remainder, steps })
}
