//! Lyndon–Shirshov words and monomials.
//!
//! A word is LS when it is strictly greater than each of its nontrivial
//! rotations; a super-LS word is an LS word or `vv` with `v` an LS word of
//! odd total parity. Super-LS words are in bijection with super-LS monomials
//! through [`standard_bracketing`].

use std::cmp::Ordering;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::liepoly::{AssocPoly, FreeLie, LiePoly, Scalar};
use crate::words::{Alphabet, LieMonomial, Letter, Parity, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketingResult {
    pub monomial: LieMonomial,
    /// Coefficient of `rho(monomial)` in the associative expansion.
    pub leading_coefficient: u32,
}

/// A bracketing of `u = a·v·b` in which `[v]` sits as the subtree over
/// the leaf positions `block`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialBracketing {
    pub monomial: LieMonomial,
    pub leading_coefficient: u32,
    pub block: Range<usize>,
}

pub fn is_ls_word(u: &Word) -> Result<bool> {
    if u.is_empty() {
        return Err(Error::EmptyWord);
    }
    let n = u.len();
    let l = u.letters();
    Ok((1..n).all(|i| {
        let rot = l[i..].iter().chain(l[..i].iter());
        l.iter().cmp(rot) == Ordering::Greater
    }))
}

/// `Some(v)` when `u = v·v`.
fn square_root(u: &Word) -> Option<Word> {
    let n = u.len();
    if n % 2 == 0 && n > 0 && u.letters()[..n / 2] == u.letters()[n / 2..] {
        Some(u.prefix(n / 2))
    } else {
        None
    }
}

pub fn is_super_ls_word(alphabet: &Alphabet, u: &Word) -> Result<bool> {
    if is_ls_word(u)? {
        return Ok(true);
    }
    Ok(match square_root(u) {
        Some(v) => is_ls_word(&v)? && alphabet.word_parity(&v).is_odd(),
        None => false,
    })
}

pub fn is_ls_monomial(m: &LieMonomial) -> bool {
    match m {
        LieMonomial::Leaf(_) => true,
        LieMonomial::Node(u1, u2) => {
            if !is_ls_monomial(u1) || !is_ls_monomial(u2) {
                return false;
            }
            let w = u2.rho();
            if u1.rho().lex_cmp(&w) != Ordering::Greater {
                return false;
            }
            match u1.as_ref() {
                LieMonomial::Node(_, v2) => v2.rho().lex_cmp(&w) != Ordering::Greater,
                LieMonomial::Leaf(_) => true,
            }
        }
    }
}

pub fn is_super_ls_monomial(alphabet: &Alphabet, m: &LieMonomial) -> bool {
    if is_ls_monomial(m) {
        return true;
    }
    match m {
        LieMonomial::Node(a, b) => a == b && is_ls_monomial(a) && a.parity(alphabet).is_odd(),
        LieMonomial::Leaf(_) => false,
    }
}

/// Standard bracketing of an LS word, no checks.
fn standard_ls(u: &Word) -> LieMonomial {
    if u.len() == 1 {
        return LieMonomial::Leaf(u.letters()[0]);
    }
    // Longest proper LS suffix.
    let split = (1..u.len())
        .find(|&i| is_ls_word(&u.suffix_from(i)).unwrap_or(false))
        .expect("every letter is an LS word");
    LieMonomial::node(standard_ls(&u.prefix(split)), standard_ls(&u.suffix_from(split)))
}

pub fn standard_bracketing(alphabet: &Alphabet, u: &Word) -> Result<BracketingResult> {
    alphabet.check(u)?;
    if is_ls_word(u)? {
        return Ok(BracketingResult {
            monomial: standard_ls(u),
            leading_coefficient: 1,
        });
    }
    match square_root(u) {
        Some(v) if is_ls_word(&v)? && alphabet.word_parity(&v).is_odd() => {
            let half = standard_ls(&v);
            Ok(BracketingResult {
                monomial: LieMonomial::node(half.clone(), half),
                leading_coefficient: 2,
            })
        }
        _ => Err(Error::NotSuperLs(alphabet.format_word(u))),
    }
}

/// Leading coefficient of a bracketing whose leaves are the letters of `ρ`,
/// with an optional atomic block `(range, lc)`. `None` when the expansion's
/// leading word is not `ρ(tree)`.
///
/// A node `[P, Q]` with leading words `p`, `q` has leading word `pq` iff
/// `pq > qp`, or `pq = qp` and both are odd (coefficient doubles).
fn tree_coefficient(
    alphabet: &Alphabet,
    tree: &LieMonomial,
    block: Option<(Range<usize>, u32)>,
) -> Option<u32> {
    fn go(
        alphabet: &Alphabet,
        tree: &LieMonomial,
        offset: usize,
        block: &Option<(Range<usize>, u32)>,
    ) -> Option<(Word, Parity, u32)> {
        if let Some((range, lc)) = block {
            if range.start == offset && range.len() == tree.len() {
                let w = tree.rho();
                let p = alphabet.word_parity(&w);
                return Some((w, p, *lc));
            }
        }
        match tree {
            LieMonomial::Leaf(l) => Some((Word::letter(*l), alphabet.parity(*l), 1)),
            LieMonomial::Node(a, b) => {
                let (wa, pa, ca) = go(alphabet, a, offset, block)?;
                let (wb, pb, cb) = go(alphabet, b, offset + a.len(), block)?;
                let c = node_coefficient(&wa, pa, ca, &wb, pb, cb)?;
                Some((wa.concat(&wb), pa + pb, c))
            }
        }
    }
    go(alphabet, tree, 0, &block).map(|(_, _, c)| c)
}

fn node_coefficient(wa: &Word, pa: Parity, ca: u32, wb: &Word, pb: Parity, cb: u32) -> Option<u32> {
    let ab = wa.concat(wb);
    let ba = wb.concat(wa);
    match ab.lex_cmp(&ba) {
        Ordering::Greater => Some(ca * cb),
        Ordering::Equal if pa.both_odd(pb) => Some(2 * ca * cb),
        _ => None,
    }
}

fn check_factorization(alphabet: &Alphabet, u: &Word, v: &Word, a: &Word, b: &Word) -> Result<()> {
    if a.concat(v).concat(b) != *u {
        return Err(Error::BadSubword {
            word: alphabet.format_word(u),
            sub: alphabet.format_word(v),
        });
    }
    for w in [u, v] {
        if !is_super_ls_word(alphabet, w)? {
            return Err(Error::NotSuperLs(alphabet.format_word(w)));
        }
    }
    Ok(())
}

/// A bracketing of `u = a·v·b` containing `[v]` as a sub-monomial with
/// leading word `u` and the smallest possible leading coefficient. This is
/// 1 or 2, except for squares `u = ww` with `v` a square inside one copy of
/// `w`, where it is 4 (e.g. `[[x,[y,y]],[[x,y],y]]` for odd `x`, `y`).
///
/// When the standard bracketing of `u` already has `[v]` over the block it
/// is returned. Otherwise the letters of `a`, the block `[v]` and the letters
/// of `b` are bracketed by an interval search that keeps, for every interval,
/// the smallest achievable leading coefficient under the node rule of
/// [`tree_coefficient`], preferring the shortest left factor on ties.
pub fn special_bracketing(
    alphabet: &Alphabet,
    u: &Word,
    v: &Word,
    a: &Word,
    b: &Word,
) -> Result<SpecialBracketing> {
    check_factorization(alphabet, u, v, a, b)?;
    let block = a.len()..a.len() + v.len();
    let std_u = standard_bracketing(alphabet, u)?;
    if std_u.monomial.subtree_at(block.start, block.len()).is_some() {
        return Ok(SpecialBracketing {
            monomial: std_u.monomial,
            leading_coefficient: std_u.leading_coefficient,
            block,
        });
    }

    let std_v = standard_bracketing(alphabet, v)?;
    struct Item {
        word: Word,
        parity: Parity,
        tree: LieMonomial,
        lc: u32,
    }
    let leaf = |l: Letter| Item {
        word: Word::letter(l),
        parity: alphabet.parity(l),
        tree: LieMonomial::Leaf(l),
        lc: 1,
    };
    let mut items: Vec<Item> = a.letters().iter().map(|&l| leaf(l)).collect();
    items.push(Item {
        word: v.clone(),
        parity: alphabet.word_parity(v),
        tree: std_v.monomial,
        lc: std_v.leading_coefficient,
    });
    items.extend(b.letters().iter().map(|&l| leaf(l)));

    let n = items.len();
    // best[i][j] = (lc, split) for items i..=j
    let mut best: Vec<Vec<Option<(u32, usize)>>> = vec![vec![None; n]; n];
    let mut words: Vec<Vec<Word>> = vec![vec![Word::empty(); n]; n];
    let mut parities = vec![vec![Parity::Even; n]; n];
    for (i, item) in items.iter().enumerate() {
        best[i][i] = Some((item.lc, i));
        words[i][i] = item.word.clone();
        parities[i][i] = item.parity;
    }
    for len in 2..=n {
        for i in 0..=n - len {
            let j = i + len - 1;
            words[i][j] = words[i][j - 1].concat(&items[j].word);
            parities[i][j] = parities[i][j - 1] + items[j].parity;
            let mut choice: Option<(u32, usize)> = None;
            for k in i..j {
                let (Some((cl, _)), Some((cr, _))) = (best[i][k], best[k + 1][j]) else {
                    continue;
                };
                let Some(c) = node_coefficient(
                    &words[i][k],
                    parities[i][k],
                    cl,
                    &words[k + 1][j],
                    parities[k + 1][j],
                    cr,
                ) else {
                    continue;
                };
                if choice.is_none_or(|(best_c, _)| c < best_c) {
                    choice = Some((c, k));
                }
            }
            best[i][j] = choice;
        }
    }

    fn build(items: &[Item], best: &[Vec<Option<(u32, usize)>>], i: usize, j: usize) -> LieMonomial {
        if i == j {
            return items[i].tree.clone();
        }
        let (_, k) = best[i][j].expect("interval reached only when feasible");
        LieMonomial::node(build(items, best, i, k), build(items, best, k + 1, j))
    }

    match best[0][n - 1] {
        Some((lc, _)) => Ok(SpecialBracketing {
            monomial: build(&items, &best, 0, n - 1),
            leading_coefficient: lc,
            block,
        }),
        None => Err(Error::Internal(format!(
            "no special bracketing of {} around {}",
            alphabet.format_word(u),
            alphabet.format_word(v)
        ))),
    }
}

/// Leading coefficient of a bracketing read off by the node rule, with
/// `[v]` over `block` treated as a unit of coefficient `block_lc`.
pub fn bracketing_coefficient(
    alphabet: &Alphabet,
    tree: &LieMonomial,
    block: Option<(Range<usize>, u32)>,
) -> Option<u32> {
    tree_coefficient(alphabet, tree, block)
}

/// The monic `[u]_v`.
pub fn relative_bracketing(lie: &FreeLie, u: &Word, v: &Word, a: &Word, b: &Word) -> Result<LiePoly> {
    let sb = special_bracketing(lie.alphabet(), u, v, a, b)?;
    let value = lie.eval_monomial(&sb.monomial);
    Ok(value.scaled(&Scalar::ratio(1, sb.leading_coefficient as i64)))
}

/// The monic `[u]_p`: `[u]_{p̄}` with the sub-monomial `[p̄]` replaced by `p`.
pub fn relative_bracketing_poly(
    lie: &FreeLie,
    u: &Word,
    p: &LiePoly,
    a: &Word,
    b: &Word,
) -> Result<LiePoly> {
    let (lead, lc) = lie.leading_term(p)?;
    if !lc.is_one() {
        return Err(Error::NotMonic(lc.to_string()));
    }
    let sb = special_bracketing(lie.alphabet(), u, &lead, a, b)?;
    let expanded = lie.expand(p);
    let value = expand_with_block(lie, &sb.monomial, 0, &sb.block, &expanded);
    let result = lie.to_ls_coordinates(&value)?;
    let (top, c) = lie.leading_term(&result)?;
    if top != *u {
        return Err(Error::Internal(format!(
            "[{}]_p has leading word {}",
            lie.alphabet().format_word(u),
            lie.alphabet().format_word(&top)
        )));
    }
    let inv = c.inv().ok_or(Error::ZeroPolynomial)?;
    Ok(result.scaled(&inv))
}

fn expand_with_block(
    lie: &FreeLie,
    tree: &LieMonomial,
    offset: usize,
    block: &Range<usize>,
    subst: &AssocPoly,
) -> AssocPoly {
    if offset == block.start && tree.len() == block.len() {
        return subst.clone();
    }
    match tree {
        LieMonomial::Leaf(l) => AssocPoly::term(Word::letter(*l), Scalar::one()),
        LieMonomial::Node(x, y) => {
            let ex = expand_with_block(lie, x, offset, block, subst);
            let ey = expand_with_block(lie, y, offset + x.len(), block, subst);
            lie.assoc_bracket(&ex, &ey)
        }
    }
}

/// LS words of length `1..=max_len` over `k` letters (generation of Lyndon
/// words in the reversed letter order).
pub fn enumerate_ls_words(k: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if k == 0 || max_len == 0 {
        return out;
    }
    let top = k as i64 - 1;
    let mut w: Vec<i64> = vec![-1];
    while let Some(last) = w.last_mut() {
        *last += 1;
        out.push(w.iter().map(|&c| (top - c) as Letter).collect::<Word>());
        let m = w.len();
        while w.len() < max_len {
            w.push(w[w.len() - m]);
        }
        while w.last() == Some(&top) {
            w.pop();
        }
    }
    out
}

/// All super-LS words of length `1..=max_len`, sorted by deglex.
pub fn enumerate_super_ls_words(alphabet: &Alphabet, max_len: usize) -> Vec<Word> {
    let ls = enumerate_ls_words(alphabet.len(), max_len);
    let squares: Vec<Word> = ls
        .iter()
        .filter(|v| 2 * v.len() <= max_len && alphabet.word_parity(v).is_odd())
        .map(|v| v.concat(v))
        .collect();
    let mut out: Vec<Word> = ls.into_iter().chain(squares).collect();
    out.sort();
    out
}
