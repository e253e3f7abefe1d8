//! Elements of the free Lie superalgebra and of its associative envelope.
//!
//! A [`LiePoly`] stores coordinates in the super-LS basis: the key `u` stands
//! for the standard bracketing `[u]`. An [`AssocPoly`] stores coefficients of
//! associative words. Both are maps from [`Word`] to [`Scalar`] without zero
//! entries, iterated in deglex order.

mod reduce;
mod scalar;

use std::collections::{btree_map, BTreeMap, HashMap};
use std::fmt;
use std::marker::PhantomData;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::lyndon::{is_ls_word, is_super_ls_word, standard_bracketing};
use crate::words::{Alphabet, LieMonomial, Parity, Word};

pub use reduce::{reduce, reduce_traced, EliminationStep, Reduction};
pub use scalar::{parse_rational, Field, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Assoc {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Lie {}

/// A finite linear combination of words.
pub struct Combination<K> {
    terms: BTreeMap<Word, Scalar>,
    _kind: PhantomData<K>,
}

pub type AssocPoly = Combination<Assoc>;
pub type LiePoly = Combination<Lie>;

impl<K> Clone for Combination<K> {
    fn clone(&self) -> Self {
        Combination {
            terms: self.terms.clone(),
            _kind: PhantomData,
        }
    }
}

impl<K> PartialEq for Combination<K> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<K> Eq for Combination<K> {}

impl<K> fmt::Debug for Combination<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.terms.iter().map(|(w, c)| (w, c.to_string())))
            .finish()
    }
}

impl<K> Default for Combination<K> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<K> Combination<K> {
    pub fn zero() -> Self {
        Combination {
            terms: BTreeMap::new(),
            _kind: PhantomData,
        }
    }

    pub fn term(word: Word, coef: Scalar) -> Self {
        let mut out = Self::zero();
        out.add_term(word, coef);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending deglex order.
    pub fn iter(&self) -> btree_map::Iter<'_, Word, Scalar> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    /// The deglex-greatest key and its stored coefficient.
    pub fn leading(&self) -> Option<(&Word, &Scalar)> {
        self.terms.last_key_value()
    }

    pub fn coeff(&self, word: &Word) -> Scalar {
        self.terms.get(word).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, word: Word, coef: Scalar) {
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            btree_map::Entry::Vacant(e) => {
                e.insert(coef);
            }
            btree_map::Entry::Occupied(mut e) => {
                let sum = &*e.get() + &coef;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn remove(&mut self, word: &Word) -> Option<Scalar> {
        self.terms.remove(word)
    }

    /// `self += k · other`.
    pub fn add_scaled(&mut self, other: &Self, k: &Scalar) {
        if k.is_zero() {
            return;
        }
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c * k);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::from_int(-1));
        out
    }

    pub fn scaled(&self, k: &Scalar) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, k);
        out
    }

    pub fn neg(&self) -> Self {
        self.scaled(&Scalar::from_int(-1))
    }

    /// Common parity of all keys; `Ok(None)` for zero.
    pub fn parity(&self, alphabet: &Alphabet) -> Result<Option<Parity>> {
        let mut out = None;
        for w in self.terms.keys() {
            let p = alphabet.word_parity(w);
            match out {
                None => out = Some(p),
                Some(q) if q != p => return Err(Error::Inhomogeneous),
                _ => {}
            }
        }
        Ok(out)
    }

    /// Longest key length, 0 for zero.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    /// Splits into components by key length.
    pub fn homogeneous_parts(&self) -> BTreeMap<usize, Self> {
        let mut out: BTreeMap<usize, Self> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(w.len()).or_default().terms.insert(w.clone(), c.clone());
        }
        out
    }
}

impl<K> FromIterator<(Word, Scalar)> for Combination<K> {
    fn from_iter<I: IntoIterator<Item = (Word, Scalar)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (w, c) in iter {
            out.add_term(w, c);
        }
        out
    }
}

impl AssocPoly {
    pub fn mul(&self, other: &AssocPoly) -> AssocPoly {
        let mut out = AssocPoly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }

    /// `u · self · v` for words `u`, `v`.
    pub fn sandwich(&self, u: &Word, v: &Word) -> AssocPoly {
        self.terms
            .iter()
            .map(|(w, c)| (u.concat(w).concat(v), c.clone()))
            .collect()
    }
}

/// Row echelon form of a family of combinations, pivoting on leading words.
#[derive(Clone, Debug)]
pub struct Echelon<K> {
    rows: BTreeMap<Word, Combination<K>>,
}

impl<K> Default for Echelon<K> {
    fn default() -> Self {
        Echelon {
            rows: BTreeMap::new(),
        }
    }
}

impl<K> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// `p` reduced against the rows.
    pub fn reduce(&self, p: &Combination<K>) -> Combination<K> {
        let mut out = p.clone();
        for (lead, row) in self.rows.iter().rev() {
            let c = out.coeff(lead);
            if !c.is_zero() {
                let k = &c / &row.coeff(lead);
                out.add_scaled(row, &-&k);
            }
        }
        out
    }

    pub fn contains(&self, p: &Combination<K>) -> bool {
        self.reduce(p).is_zero()
    }

    /// Adds `p`; false when it was already in the span.
    pub fn insert(&mut self, p: &Combination<K>) -> bool {
        let r = self.reduce(p);
        match r.leading() {
            None => false,
            Some((lead, _)) => {
                self.rows.insert(lead.clone(), r);
                true
            }
        }
    }
}

/// The free Lie superalgebra over a graded alphabet and a field, with a
/// cache of basis expansions.
#[derive(Debug)]
pub struct FreeLie {
    alphabet: Arc<Alphabet>,
    field: Field,
    expansions: RwLock<HashMap<Word, Arc<AssocPoly>>>,
}

impl FreeLie {
    pub fn new(alphabet: Arc<Alphabet>, field: Field) -> FreeLie {
        FreeLie {
            alphabet,
            field,
            expansions: RwLock::new(HashMap::new()),
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn one(&self) -> Scalar {
        self.field.one()
    }

    pub fn scalar(&self, s: &Scalar) -> Scalar {
        self.field.coerce(s)
    }

    pub fn generator(&self, letter: crate::words::Letter) -> LiePoly {
        LiePoly::term(Word::letter(letter), self.one())
    }

    /// The basis element `[u]` for a super-LS word `u`.
    pub fn basis_element(&self, u: &Word) -> Result<LiePoly> {
        self.alphabet.check(u)?;
        if u.is_empty() || !is_super_ls_word(&self.alphabet, u)? {
            return Err(Error::NotSuperLs(self.alphabet.format_word(u)));
        }
        Ok(LiePoly::term(u.clone(), self.one()))
    }

    /// Coefficient of `u` in the expansion of `[u]`: 2 for squares, else 1.
    pub fn basis_lc(&self, u: &Word) -> Scalar {
        if is_ls_word(u).unwrap_or(false) {
            self.one()
        } else {
            self.scalar(&Scalar::from_int(2))
        }
    }

    /// Associative expansion of the basis element `[u]`.
    pub fn basis_expansion(&self, u: &Word) -> Arc<AssocPoly> {
        if let Some(e) = self.expansions.read().expect("cache lock").get(u) {
            return e.clone();
        }
        let tree = standard_bracketing(&self.alphabet, u)
            .unwrap_or_else(|e| panic!("basis key {u:?} is not super-LS: {e}"))
            .monomial;
        let value = Arc::new(match &tree {
            LieMonomial::Leaf(l) => AssocPoly::term(Word::letter(*l), self.one()),
            LieMonomial::Node(a, b) => {
                let ea = self.basis_expansion(&a.rho());
                let eb = self.basis_expansion(&b.rho());
                self.assoc_bracket(&ea, &eb)
            }
        });
        self.expansions
            .write()
            .expect("cache lock")
            .insert(u.clone(), value.clone());
        value
    }

    /// `PQ − (−1)^{|P||Q|} QP`, extended termwise.
    pub fn assoc_bracket(&self, p: &AssocPoly, q: &AssocPoly) -> AssocPoly {
        let qp: Vec<(&Word, &Scalar, Parity)> = q
            .iter()
            .map(|(w, c)| (w, c, self.alphabet.word_parity(w)))
            .collect();
        let mut out = AssocPoly::zero();
        for (u, a) in p.iter() {
            let pu = self.alphabet.word_parity(u);
            for &(v, b, pv) in &qp {
                let ab = a * b;
                let neg = if pu.both_odd(pv) { ab.clone() } else { -&ab };
                out.add_term(u.concat(v), ab);
                out.add_term(v.concat(u), neg);
            }
        }
        out
    }

    pub fn expand(&self, f: &LiePoly) -> AssocPoly {
        let mut out = AssocPoly::zero();
        for (u, c) in f.iter() {
            out.add_scaled(&self.basis_expansion(u), c);
        }
        out
    }

    /// Expansion of an arbitrary bracket tree.
    pub fn expand_monomial(&self, tree: &LieMonomial) -> AssocPoly {
        match tree {
            LieMonomial::Leaf(l) => AssocPoly::term(Word::letter(*l), self.one()),
            LieMonomial::Node(a, b) => {
                self.assoc_bracket(&self.expand_monomial(a), &self.expand_monomial(b))
            }
        }
    }

    /// Inverse of [`FreeLie::expand`] on Lie elements.
    pub fn to_ls_coordinates(&self, p: &AssocPoly) -> Result<LiePoly> {
        let mut rem = p.clone();
        let mut out = LiePoly::zero();
        while let Some((w, c)) = rem.leading() {
            let (w, c) = (w.clone(), c.clone());
            if !is_super_ls_word(&self.alphabet, &w)? {
                return Err(Error::NotLieElement(self.alphabet.format_word(&w)));
            }
            let k = &c / &self.basis_lc(&w);
            rem.add_scaled(&self.basis_expansion(&w), &-&k);
            out.add_term(w, k);
        }
        Ok(out)
    }

    pub fn superbracket(&self, f: &LiePoly, g: &LiePoly) -> LiePoly {
        let e = self.assoc_bracket(&self.expand(f), &self.expand(g));
        self.to_ls_coordinates(&e)
            .expect("the bracket of Lie elements is a Lie element")
    }

    pub fn eval_monomial(&self, tree: &LieMonomial) -> LiePoly {
        self.to_ls_coordinates(&self.expand_monomial(tree))
            .expect("a bracket tree is a Lie element")
    }

    /// Leading word and its coefficient in the associative expansion.
    pub fn leading_term(&self, f: &LiePoly) -> Result<(Word, Scalar)> {
        let (u, c) = f.leading().ok_or(Error::ZeroPolynomial)?;
        Ok((u.clone(), c * &self.basis_lc(u)))
    }

    /// `f` scaled so that its leading term has coefficient 1.
    pub fn make_monic(&self, f: &LiePoly) -> Result<LiePoly> {
        let (_, c) = self.leading_term(f)?;
        let inv = c.inv().ok_or(Error::ZeroPolynomial)?;
        Ok(f.scaled(&inv))
    }

    pub fn is_monic(&self, f: &LiePoly) -> bool {
        self.leading_term(f).map(|(_, c)| c.is_one()).unwrap_or(false)
    }

    /// Terms in descending order, each as its standard bracketing.
    pub fn format_poly(&self, f: &LiePoly) -> String {
        format_terms(f.terms.iter().rev(), |u| {
            standard_bracketing(&self.alphabet, u)
                .map(|r| self.alphabet.format_monomial(&r.monomial))
                .unwrap_or_else(|_| self.alphabet.format_word(u))
        })
    }

    pub fn format_assoc(&self, p: &AssocPoly) -> String {
        format_terms(p.terms.iter().rev(), |u| self.alphabet.format_word(u))
    }
}

fn format_terms<'a>(
    terms: impl Iterator<Item = (&'a Word, &'a Scalar)>,
    name: impl Fn(&Word) -> String,
) -> String {
    let mut out = String::new();
    for (i, (w, c)) in terms.enumerate() {
        let negative = c.is_negative();
        let abs = if negative { -c } else { c.clone() };
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if !abs.is_one() {
            out.push_str(&format!("{abs}*"));
        }
        out.push_str(&name(w));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
