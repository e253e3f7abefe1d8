//! Graded alphabets, associative words and bracket trees.
//!
//! Letters are ranks into an [`Alphabet`]; rank order is the generator order
//! `≺`. Two orders live on words:
//!
//! * the lexicographic order [`Word::lex_cmp`], in which every nonempty word
//!   is smaller than the empty word (so a proper prefix is *greater* than
//!   its extensions);
//! * the degree-lexicographic order [`Word::deglex_cmp`], shorter first. This
//!   is the `Ord` impl of [`Word`], so sorted containers of words iterate in
//!   deglex order and their last element is the leading word.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Letter = u16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: u8) -> Option<Parity> {
        match bit {
            0 => Some(Parity::Even),
            1 => Some(Parity::Odd),
            _ => None,
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// `true` when `(-1)^{|self||other|} = -1`.
    pub fn both_odd(self, other: Parity) -> bool {
        self.is_odd() && other.is_odd()
    }
}

impl Add for Parity {
    type Output = Parity;

    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bit())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub parity: Parity,
    pub rank: Letter,
}

pub(crate) fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// An ordered, parity-graded set of generators. Input order is rank order.
#[derive(Clone, Debug)]
pub struct Alphabet {
    gens: Vec<Generator>,
    index: HashMap<String, Letter>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens
    }
}

impl Eq for Alphabet {}

impl Alphabet {
    pub fn new<S: Into<String>>(gens: impl IntoIterator<Item = (S, Parity)>) -> Result<Alphabet> {
        let mut out = Alphabet {
            gens: Vec::new(),
            index: HashMap::new(),
        };
        for (name, parity) in gens {
            let name = name.into();
            if !valid_name(&name) {
                return Err(Error::InvalidName(name));
            }
            if out.index.contains_key(&name) {
                return Err(Error::DuplicateGenerator(name));
            }
            let rank = out.gens.len() as Letter;
            out.index.insert(name.clone(), rank);
            out.gens.push(Generator { name, parity, rank });
        }
        Ok(out)
    }

    /// Parses `"name:parity,name:parity,..."` in ascending order.
    pub fn parse_spec(spec: &str) -> Result<Alphabet> {
        let mut gens = Vec::new();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, parity) = item
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected name:parity, got {item:?}")))?;
            let parity = match parity.trim() {
                "0" => Parity::Even,
                "1" => Parity::Odd,
                other => return Err(Error::Parse(format!("parity must be 0 or 1, got {other:?}"))),
            };
            gens.push((name.trim().to_string(), parity));
        }
        if gens.is_empty() {
            return Err(Error::Parse("empty alphabet".into()));
        }
        Alphabet::new(gens)
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn parity(&self, letter: Letter) -> Parity {
        self.gens[letter as usize].parity
    }

    pub fn name(&self, letter: Letter) -> &str {
        &self.gens[letter as usize].name
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.index.get(name).copied()
    }

    pub fn word_parity(&self, word: &Word) -> Parity {
        word.letters()
            .iter()
            .fold(Parity::Even, |acc, &l| acc + self.parity(l))
    }

    pub fn check(&self, word: &Word) -> Result<()> {
        match word.letters().iter().find(|&&l| l as usize >= self.len()) {
            Some(&letter) => Err(Error::AlphabetMismatch {
                letter,
                size: self.len(),
            }),
            None => Ok(()),
        }
    }

    pub fn lex_less(&self, u: &Word, v: &Word) -> Result<bool> {
        self.check(u)?;
        self.check(v)?;
        Ok(u.lex_cmp(v) == Ordering::Less)
    }

    pub fn deglex_less(&self, u: &Word, v: &Word) -> Result<bool> {
        self.check(u)?;
        self.check(v)?;
        Ok(u.deglex_cmp(v) == Ordering::Less)
    }

    fn single_char_names(&self) -> bool {
        self.gens.iter().all(|g| g.name.len() == 1)
    }

    /// Reads a word written either as names separated by `.` or whitespace,
    /// or as a plain concatenation (tokenized by longest match).
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        let mut letters = SmallVec::new();
        if text.contains('.') || text.contains(char::is_whitespace) {
            for tok in text.split(|c: char| c == '.' || c.is_whitespace()) {
                if tok.is_empty() {
                    continue;
                }
                letters.push(
                    self.letter(tok)
                        .ok_or_else(|| Error::UnknownGenerator(tok.to_string()))?,
                );
            }
            return Ok(Word(letters));
        }
        let mut rest = text;
        while !rest.is_empty() {
            let best = self
                .gens
                .iter()
                .filter(|g| rest.starts_with(g.name.as_str()))
                .max_by_key(|g| g.name.len())
                .ok_or_else(|| Error::UnknownGenerator(rest.to_string()))?;
            letters.push(best.rank);
            rest = &rest[best.name.len()..];
        }
        Ok(Word(letters))
    }

    pub fn format_word(&self, word: &Word) -> String {
        if word.is_empty() {
            return "1".to_string();
        }
        let sep = if self.single_char_names() { "" } else { "." };
        word.letters()
            .iter()
            .map(|&l| self.name(l))
            .collect::<Vec<_>>()
            .join(sep)
    }

    pub fn format_monomial(&self, m: &LieMonomial) -> String {
        match m {
            LieMonomial::Leaf(l) => self.name(*l).to_string(),
            LieMonomial::Node(a, b) => {
                format!("[{},{}]", self.format_monomial(a), self.format_monomial(b))
            }
        }
    }
}

/// An associative word. Compared in deglex order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(SmallVec<[Letter; 8]>);

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({:?})", self.0.as_slice())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deglex_cmp(other)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<&[Letter]> for Word {
    fn from(letters: &[Letter]) -> Word {
        Word(SmallVec::from_slice(letters))
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Word {
        Word(SmallVec::from_vec(letters))
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Word {
        Word(iter.into_iter().collect())
    }
}

impl Word {
    pub fn empty() -> Word {
        Word(SmallVec::new())
    }

    pub fn letter(l: Letter) -> Word {
        let mut v = SmallVec::new();
        v.push(l);
        Word(v)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word::from(&self.0[start..end])
    }

    pub fn prefix(&self, len: usize) -> Word {
        self.slice(0, len)
    }

    pub fn suffix_from(&self, start: usize) -> Word {
        self.slice(start, self.len())
    }

    /// The lexicographic order `<`: a nonempty word is below the empty word.
    pub fn lex_cmp(&self, other: &Word) -> Ordering {
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        // One is a prefix of the other; the longer one has a nonempty tail,
        // and nonempty < empty.
        other.len().cmp(&self.len())
    }

    /// The degree-lexicographic order `≪`.
    pub fn deglex_cmp(&self, other: &Word) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.lex_cmp(other))
    }

    pub fn cyclic_rotations(&self) -> Result<Vec<Word>> {
        if self.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok((0..self.len())
            .map(|i| self.suffix_from(i).concat(&self.prefix(i)))
            .collect())
    }

    /// Start positions of `pattern` in `self`, ascending; overlaps included.
    pub fn positions(&self, pattern: &Word) -> Vec<usize> {
        if pattern.is_empty() || pattern.len() > self.len() {
            return Vec::new();
        }
        self.0
            .windows(pattern.len())
            .enumerate()
            .filter(|(_, w)| *w == pattern.letters())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn contains(&self, pattern: &Word) -> bool {
        !pattern.is_empty()
            && pattern.len() <= self.len()
            && self.0.windows(pattern.len()).any(|w| w == pattern.letters())
    }

    /// All factorizations `self = a · pattern · b`, by increasing `l(a)`.
    pub fn find_occurrences(&self, pattern: &Word) -> Result<Vec<(Word, Word)>> {
        if pattern.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(self
            .positions(pattern)
            .into_iter()
            .map(|i| (self.prefix(i), self.suffix_from(i + pattern.len())))
            .collect())
    }
}

/// A nonassociative word: a binary bracketing tree over letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LieMonomial {
    Leaf(Letter),
    Node(Box<LieMonomial>, Box<LieMonomial>),
}

impl LieMonomial {
    pub fn node(a: LieMonomial, b: LieMonomial) -> LieMonomial {
        LieMonomial::Node(Box::new(a), Box::new(b))
    }

    /// Bracket removal.
    pub fn rho(&self) -> Word {
        let mut out = Word::empty();
        self.push_leaves(&mut out);
        out
    }

    fn push_leaves(&self, out: &mut Word) {
        match self {
            LieMonomial::Leaf(l) => out.0.push(*l),
            LieMonomial::Node(a, b) => {
                a.push_leaves(out);
                b.push_leaves(out);
            }
        }
    }

    pub fn len(&self) -> usize {
        match self {
            LieMonomial::Leaf(_) => 1,
            LieMonomial::Node(a, b) => a.len() + b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn parity(&self, alphabet: &Alphabet) -> Parity {
        alphabet.word_parity(&self.rho())
    }

    /// The subtree covering exactly the leaf positions `start..start+len`.
    pub fn subtree_at(&self, start: usize, len: usize) -> Option<&LieMonomial> {
        self.subtree_rec(0, start, len)
    }

    fn subtree_rec(&self, offset: usize, start: usize, len: usize) -> Option<&LieMonomial> {
        let here = self.len();
        if offset == start && here == len {
            return Some(self);
        }
        match self {
            LieMonomial::Leaf(_) => None,
            LieMonomial::Node(a, b) => {
                let split = offset + a.len();
                if start + len <= split {
                    a.subtree_rec(offset, start, len)
                } else if start >= split {
                    b.subtree_rec(split, start, len)
                } else {
                    None
                }
            }
        }
    }
}
