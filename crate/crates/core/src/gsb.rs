//! Compositions, triviality and degree-bounded Shirshov completion.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::liepoly::{reduce, reduce_traced, AssocPoly, EliminationStep, FreeLie, LiePoly};
use crate::lyndon::{enumerate_super_ls_words, is_super_ls_word, relative_bracketing_poly};
use crate::words::Word;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

fn fresh_id() -> u64 {
    NEXT_ID.fetch_add(1, AtomicOrdering::Relaxed)
}

/// A monic relation. The id changes whenever the polynomial does.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub id: u64,
    pub poly: LiePoly,
    pub lead: Word,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Completed {
    Unchecked,
    UpTo(usize),
    All,
}

impl Completed {
    pub fn covers(self, degree: usize) -> bool {
        match self {
            Completed::Unchecked => false,
            Completed::UpTo(d) => degree <= d,
            Completed::All => true,
        }
    }
}

type RelativeKey = (u64, Word, usize);

/// Monic relations sorted by leading word.
#[derive(Clone)]
pub struct RelationSet {
    lie: Arc<FreeLie>,
    relations: Vec<Relation>,
    leads: HashMap<Word, Vec<usize>>,
    completed: Completed,
    relative: Arc<Mutex<HashMap<RelativeKey, Arc<LiePoly>>>>,
}

impl fmt::Debug for RelationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RelationSet")
            .field("relations", &self.relations)
            .field("completed", &self.completed)
            .finish()
    }
}

impl RelationSet {
    /// Makes each polynomial monic, drops exact duplicates and sorts by
    /// leading word (stable for equal leading words).
    pub fn new(lie: Arc<FreeLie>, polys: impl IntoIterator<Item = LiePoly>) -> Result<RelationSet> {
        let mut relations: Vec<Relation> = Vec::new();
        for p in polys {
            let poly = lie.make_monic(&p)?;
            let lead = poly.leading().expect("nonzero").0.clone();
            if relations.iter().any(|r| r.poly == poly) {
                continue;
            }
            relations.push(Relation {
                id: fresh_id(),
                poly,
                lead,
            });
        }
        let mut out = RelationSet {
            lie,
            relations,
            leads: HashMap::new(),
            completed: Completed::Unchecked,
            relative: Arc::new(Mutex::new(HashMap::new())),
        };
        out.reindex();
        if out.find_ambiguities(out.max_overlap_len())?.is_empty() {
            out.completed = Completed::All;
        }
        Ok(out)
    }

    fn reindex(&mut self) {
        self.relations.sort_by(|a, b| a.lead.cmp(&b.lead));
        self.leads.clear();
        for (i, r) in self.relations.iter().enumerate() {
            self.leads.entry(r.lead.clone()).or_default().push(i);
        }
    }

    fn max_overlap_len(&self) -> usize {
        2 * self.relations.iter().map(|r| r.lead.len()).max().unwrap_or(0)
    }

    pub fn lie(&self) -> &Arc<FreeLie> {
        &self.lie
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn completed(&self) -> Completed {
        self.completed
    }

    pub fn leading_words(&self) -> Vec<Word> {
        self.relations.iter().map(|r| r.lead.clone()).collect()
    }

    /// Leftmost occurrence in `u` of a leading word, with the first relation
    /// in set order having it: `(relation index, position)`.
    pub fn find_reducer(&self, u: &Word) -> Option<(usize, usize)> {
        for i in 0..u.len() {
            let hit = (i + 1..=u.len())
                .filter_map(|j| self.leads.get(&u.slice(i, j)))
                .map(|idx| idx[0])
                .min();
            if let Some(idx) = hit {
                return Some((idx, i));
            }
        }
        None
    }

    pub fn is_reducible(&self, u: &Word) -> bool {
        self.find_reducer(u).is_some()
    }

    /// The monic `[u]_s` for relation `idx` occurring in `u` at `pos`.
    pub fn relative_relation(&self, idx: usize, u: &Word, pos: usize) -> Result<Arc<LiePoly>> {
        let rel = &self.relations[idx];
        let key = (rel.id, u.clone(), pos);
        if let Some(hit) = self.relative.lock().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let value = Arc::new(relative_bracketing_poly(
            &self.lie,
            u,
            &rel.poly,
            &u.prefix(pos),
            &u.suffix_from(pos + rel.lead.len()),
        )?);
        self.relative
            .lock()
            .expect("cache lock")
            .insert(key, value.clone());
        Ok(value)
    }

    /// All ambiguities with `l(w) <= max_len`, sorted by `(w, kind, f, g, position)`.
    pub fn find_ambiguities(&self, max_len: usize) -> Result<Vec<Ambiguity>> {
        find_ambiguities(self, max_len)
    }

    /// Adds a relation (reduced and made monic first) and inter-reduces:
    /// relations whose leading word becomes reducible are reduced and
    /// re-inserted, all tails are then fully reduced. Returns the leading
    /// words that were added.
    pub fn insert(&mut self, p: &LiePoly) -> Result<Vec<Word>> {
        let mut added = Vec::new();
        let mut pending = vec![p.clone()];
        while let Some(q) = pending.pop() {
            let q = reduce(&q, self)?;
            if q.is_zero() {
                continue;
            }
            let q = self.lie.make_monic(&q)?;
            let lead = q.leading().expect("nonzero").0.clone();
            let (keep, displaced): (Vec<Relation>, Vec<Relation>) = self
                .relations
                .drain(..)
                .partition(|r| !r.lead.contains(&lead));
            self.relations = keep;
            pending.extend(displaced.into_iter().map(|r| r.poly));
            self.relations.push(Relation {
                id: fresh_id(),
                poly: q,
                lead: lead.clone(),
            });
            added.push(lead);
            self.reindex();
        }
        self.reduce_tails()?;
        self.completed = Completed::Unchecked;
        Ok(added)
    }

    fn reduce_tails(&mut self) -> Result<()> {
        for i in 0..self.relations.len() {
            let rel = &self.relations[i];
            let mut tail = rel.poly.clone();
            let head = tail.remove(&rel.lead).expect("lead present");
            let reduced = reduce(&tail, self)?;
            if reduced != tail {
                let mut poly = reduced;
                poly.add_term(rel.lead.clone(), head);
                let rel = &mut self.relations[i];
                rel.poly = poly;
                rel.id = fresh_id();
            }
        }
        Ok(())
    }

    /// Inter-reduces the current relations.
    pub fn interreduced(&self) -> Result<RelationSet> {
        let mut out = RelationSet {
            lie: self.lie.clone(),
            relations: Vec::new(),
            leads: HashMap::new(),
            completed: Completed::Unchecked,
            relative: self.relative.clone(),
        };
        for r in &self.relations {
            out.insert(&r.poly)?;
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AmbiguityKind {
    /// `w = f̄·a = b·ḡ` with `0 < l(b) < l(f̄)` and `l(w) < l(f̄) + l(ḡ)`.
    Intersection,
    /// `w = f̄ = a·ḡ·b`, `f ≠ g`.
    Inclusion,
    /// Self-overlap of `f̄ = vv` at `w = vvv`. Not super-LS; the composition
    /// is `[[v], f]`, whose `vvv` terms cancel since `[v,[v,v]] = 0`.
    Square,
}

impl fmt::Display for AmbiguityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AmbiguityKind::Intersection => "intersection",
            AmbiguityKind::Inclusion => "inclusion",
            AmbiguityKind::Square => "square",
        })
    }
}

/// `f`, `g` index the relation set; `position` is where `ḡ` starts in `w`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ambiguity {
    pub w: Word,
    pub kind: AmbiguityKind,
    pub f: usize,
    pub g: usize,
    pub position: usize,
}

fn square_half(u: &Word) -> Option<Word> {
    let n = u.len();
    (n % 2 == 0 && u.letters()[..n / 2] == u.letters()[n / 2..]).then(|| u.prefix(n / 2))
}

pub fn find_ambiguities(s: &RelationSet, max_len: usize) -> Result<Vec<Ambiguity>> {
    let alphabet = s.lie.alphabet();
    let mut out = Vec::new();
    let rels = s.relations();
    for (i, f) in rels.iter().enumerate() {
        let lf = f.lead.len();
        for (j, g) in rels.iter().enumerate() {
            let lg = g.lead.len();
            for k in 1..lf.min(lg) {
                if f.lead.letters()[lf - k..] != g.lead.letters()[..k] {
                    continue;
                }
                let w = f.lead.concat(&g.lead.suffix_from(k));
                if w.len() > max_len {
                    continue;
                }
                let position = lf - k;
                let kind = if i == j && square_half(&f.lead).is_some_and(|v| v.len() == k) {
                    AmbiguityKind::Square
                } else if is_super_ls_word(alphabet, &w)? {
                    AmbiguityKind::Intersection
                } else {
                    return Err(Error::OverlapNotSuperLs(alphabet.format_word(&w)));
                };
                out.push(Ambiguity {
                    w,
                    kind,
                    f: i,
                    g: j,
                    position,
                });
            }
            if i == j || lg > lf || lf > max_len || (lg == lf && i > j) {
                continue;
            }
            for position in f.lead.positions(&g.lead) {
                out.push(Ambiguity {
                    w: f.lead.clone(),
                    kind: AmbiguityKind::Inclusion,
                    f: i,
                    g: j,
                    position,
                });
            }
        }
    }
    out.sort();
    Ok(out)
}

fn check_ambiguity(s: &RelationSet, amb: &Ambiguity) -> Result<()> {
    let rels = s.relations();
    let bad = |msg: &str| Err(Error::InvalidAmbiguity(msg.to_string()));
    let (Some(f), Some(g)) = (rels.get(amb.f), rels.get(amb.g)) else {
        return bad("relation index out of range");
    };
    let fits_f = amb.w.len() >= f.lead.len() && amb.w.prefix(f.lead.len()) == f.lead;
    let fits_g = amb.position + g.lead.len() <= amb.w.len()
        && amb.w.slice(amb.position, amb.position + g.lead.len()) == g.lead;
    if !fits_f || !fits_g {
        return bad("leading words do not sit in w");
    }
    match amb.kind {
        AmbiguityKind::Intersection => {
            if amb.position == 0
                || amb.position >= f.lead.len()
                || amb.position + g.lead.len() != amb.w.len()
                || amb.w.len() >= f.lead.len() + g.lead.len()
            {
                return bad("not an intersection");
            }
        }
        AmbiguityKind::Inclusion => {
            if amb.w != f.lead || (amb.f == amb.g && amb.position != 0) {
                return bad("not an inclusion");
            }
        }
        AmbiguityKind::Square => {
            let v = square_half(&f.lead);
            if amb.f != amb.g || v.as_ref().map(|v| v.concat(&f.lead)) != Some(amb.w.clone()) {
                return bad("not a square self-overlap");
            }
        }
    }
    Ok(())
}

/// `⟨f,g⟩_w`: `[w]_f − [w]_g` for intersections, `f − [w]_g` for inclusions,
/// `[[v], f]` for squares.
pub fn lie_composition(s: &RelationSet, amb: &Ambiguity) -> Result<LiePoly> {
    check_ambiguity(s, amb)?;
    let lie = &s.lie;
    let f = &s.relations[amb.f];
    match amb.kind {
        AmbiguityKind::Intersection => {
            let wf = s.relative_relation(amb.f, &amb.w, 0)?;
            let wg = s.relative_relation(amb.g, &amb.w, amb.position)?;
            let value = wf.sub(&wg);
            if let Some((top, _)) = value.leading() {
                if *top >= amb.w {
                    return Err(Error::Internal(format!(
                        "composition at {} did not cancel",
                        lie.alphabet().format_word(&amb.w)
                    )));
                }
            }
            Ok(value)
        }
        AmbiguityKind::Inclusion => {
            let wg = s.relative_relation(amb.g, &amb.w, amb.position)?;
            Ok(f.poly.sub(&wg))
        }
        AmbiguityKind::Square => {
            let v = square_half(&f.lead).expect("checked");
            let bv = lie.basis_element(&v)?;
            Ok(lie.superbracket(&bv, &f.poly))
        }
    }
}

/// `(f,g)_w = f·a − b·g` (intersection, square) or `f − a·g·b` (inclusion).
pub fn assoc_composition(
    f: &AssocPoly,
    g: &AssocPoly,
    w: &Word,
    kind: AmbiguityKind,
    position: usize,
) -> Result<AssocPoly> {
    let bad = |msg: &str| Err(Error::InvalidAmbiguity(msg.to_string()));
    let (Some((fl, fc)), Some((gl, gc))) = (f.leading(), g.leading()) else {
        return bad("zero polynomial");
    };
    if !fc.is_one() || !gc.is_one() {
        return Err(Error::NotMonic(format!("{fc}, {gc}")));
    }
    if position + gl.len() > w.len() || w.slice(position, position + gl.len()) != *gl {
        return bad("ḡ does not sit in w");
    }
    if w.len() < fl.len() || w.prefix(fl.len()) != *fl {
        return bad("f̄ is not a prefix of w");
    }
    let a = w.suffix_from(fl.len());
    let b = w.prefix(position);
    match kind {
        AmbiguityKind::Intersection | AmbiguityKind::Square => {
            if position + gl.len() != w.len() || position == 0 || position >= fl.len() {
                return bad("not an overlap");
            }
            Ok(f.sandwich(&Word::empty(), &a).sub(&g.sandwich(&b, &Word::empty())))
        }
        AmbiguityKind::Inclusion => {
            if *fl != *w {
                return bad("not an inclusion");
            }
            Ok(f.sub(&g.sandwich(&b, &w.suffix_from(position + gl.len()))))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionReport {
    pub f: usize,
    pub g: usize,
    pub w: Word,
    pub kind: AmbiguityKind,
    pub position: usize,
    pub value: LiePoly,
    pub remainder: LiePoly,
    pub trivial: bool,
    pub leading_word_of_value: Option<Word>,
}

/// Reduces `comp` modulo `S`; trivial iff the remainder vanishes and every
/// elimination word, as well as the leading word of `comp`, is `≪ w`.
pub fn check_triviality(comp: &LiePoly, w: &Word, s: &RelationSet) -> Result<(LiePoly, bool)> {
    let lead = comp.leading().map(|(u, _)| u.clone());
    if lead.as_ref().is_some_and(|u| u >= w) {
        let rem = reduce(comp, s)?;
        return Ok((rem, false));
    }
    let red = reduce_traced(comp, s)?;
    let trivial = red.remainder.is_zero() && red.steps.iter().all(|st| st.word < *w);
    Ok((red.remainder, trivial))
}

pub fn composition_report(s: &RelationSet, amb: &Ambiguity) -> Result<CompositionReport> {
    let value = lie_composition(s, amb)?;
    let (remainder, trivial) = check_triviality(&value, &amb.w, s)?;
    Ok(CompositionReport {
        f: amb.f,
        g: amb.g,
        w: amb.w.clone(),
        kind: amb.kind,
        position: amb.position,
        leading_word_of_value: value.leading().map(|(u, _)| u.clone()),
        value,
        remainder,
        trivial,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogEntry {
    pub w: Word,
    pub kind: AmbiguityKind,
    pub f_lead: Word,
    pub g_lead: Word,
    pub trivial: bool,
    pub added: Vec<Word>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompletionLog {
    pub entries: Vec<LogEntry>,
}

impl CompletionLog {
    pub fn added(&self) -> impl Iterator<Item = &Word> {
        self.entries.iter().flat_map(|e| e.added.iter())
    }

    pub fn render(&self, lie: &FreeLie) -> String {
        let a = lie.alphabet();
        let mut out = String::new();
        for e in &self.entries {
            let added = if e.added.is_empty() {
                "-".to_string()
            } else {
                e.added.iter().map(|w| a.format_word(w)).collect::<Vec<_>>().join(",")
            };
            out.push_str(&format!(
                "{} {} {}/{} {} {}\n",
                a.format_word(&e.w),
                e.kind,
                a.format_word(&e.f_lead),
                a.format_word(&e.g_lead),
                if e.trivial { "trivial" } else { "nontrivial" },
                added
            ));
        }
        out
    }
}

pub const DEFAULT_RELATION_CAP: usize = 10_000;

pub fn complete(s: &RelationSet, max_deg: usize) -> Result<(RelationSet, CompletionLog)> {
    complete_capped(s, max_deg, DEFAULT_RELATION_CAP)
}

/// Shirshov's algorithm restricted to ambiguities with `l(w) <= max_deg`,
/// always treating the smallest unchecked ambiguity next.
pub fn complete_capped(
    s: &RelationSet,
    max_deg: usize,
    cap: usize,
) -> Result<(RelationSet, CompletionLog)> {
    if let Some(r) = s.relations.iter().find(|r| r.lead.len() > max_deg) {
        return Err(Error::BoundTooSmall(format!(
            "relation with leading word {} exceeds degree {max_deg}",
            s.lie.alphabet().format_word(&r.lead)
        )));
    }
    let mut cur = s.interreduced()?;
    let mut log = CompletionLog::default();
    let mut checked: HashSet<(u64, u64, Word, AmbiguityKind, usize)> = HashSet::new();
    'outer: loop {
        let ambs = cur.find_ambiguities(max_deg)?;
        for amb in ambs {
            let key = (
                cur.relations[amb.f].id,
                cur.relations[amb.g].id,
                amb.w.clone(),
                amb.kind,
                amb.position,
            );
            if !checked.insert(key) {
                continue;
            }
            let value = lie_composition(&cur, &amb)?;
            let (rem, trivial) = check_triviality(&value, &amb.w, &cur)?;
            let mut entry = LogEntry {
                w: amb.w.clone(),
                kind: amb.kind,
                f_lead: cur.relations[amb.f].lead.clone(),
                g_lead: cur.relations[amb.g].lead.clone(),
                trivial,
                added: Vec::new(),
            };
            if !rem.is_zero() {
                entry.added = cur.insert(&rem)?;
                log.entries.push(entry);
                if cur.len() > cap {
                    return Err(Error::RelationCap(cap));
                }
                continue 'outer;
            }
            log.entries.push(entry);
        }
        break;
    }
    // every ambiguity has length at most max_overlap_len; if those all fit
    // under the bound they were all checked against the final set
    cur.completed = if cur.max_overlap_len() <= max_deg
        || cur
            .find_ambiguities(cur.max_overlap_len())?
            .iter()
            .all(|a| a.w.len() <= max_deg)
    {
        Completed::All
    } else {
        Completed::UpTo(max_deg)
    };
    Ok((cur, log))
}

/// Super-LS words of length `<= max_len` avoiding every leading word.
pub fn irreducible_words(s: &RelationSet, max_len: usize) -> Result<Vec<Word>> {
    if !s.completed.covers(max_len) {
        return Err(Error::NotCompleted {
            completed: match s.completed {
                Completed::UpTo(d) => d,
                _ => 0,
            },
            requested: max_len,
        });
    }
    Ok(enumerate_super_ls_words(s.lie.alphabet(), max_len)
        .into_iter()
        .filter(|u| !s.is_reducible(u))
        .collect())
}

/// Normal form of `f` modulo a set completed up to `f`'s degree.
pub fn normal_form(f: &LiePoly, s: &RelationSet) -> Result<LiePoly> {
    let d = f.degree();
    if !s.completed.covers(d) {
        return Err(Error::NotCompleted {
            completed: match s.completed {
                Completed::UpTo(d) => d,
                _ => 0,
            },
            requested: d,
        });
    }
    reduce(f, s)
}

/// Helper for tests and reports: `Σ c_i · [w_i]_{s_i}` from recorded steps.
pub fn reconstruct(s: &RelationSet, steps: &[EliminationStep]) -> Result<LiePoly> {
    let mut out = LiePoly::zero();
    for st in steps {
        let r = s.relative_relation(st.relation, &st.word, st.prefix.len())?;
        out.add_scaled(&r, &st.coefficient);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liepoly::{Echelon, Field, Lie, Scalar};
    use crate::words::{Alphabet, Letter};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lie(spec: &str) -> Arc<FreeLie> {
        Arc::new(FreeLie::new(Arc::new(Alphabet::parse_spec(spec).unwrap()), Field::Rational))
    }

    fn q(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn b(lie: &FreeLie, p: &LiePoly, r: &LiePoly) -> LiePoly {
        lie.superbracket(p, r)
    }

    fn g(lie: &FreeLie, name: &str) -> LiePoly {
        lie.generator(lie.alphabet().letter(name).unwrap())
    }

    fn words(lie: &FreeLie, ws: &[Word]) -> Vec<String> {
        ws.iter().map(|w| lie.alphabet().format_word(w)).collect()
    }

    #[test]
    fn intersection_and_inclusion_examples() {
        let l = lie("x:0,y:0,z:0");
        let (x, y, z) = (g(&l, "x"), g(&l, "y"), g(&l, "z"));
        // leading words zy and yx overlap in zyx
        let s = RelationSet::new(l.clone(), [b(&l, &z, &y), b(&l, &y, &x)]).unwrap();
        let ambs = s.find_ambiguities(6).unwrap();
        assert_eq!(ambs.len(), 1);
        assert_eq!(l.alphabet().format_word(&ambs[0].w), "zyx");
        assert_eq!(ambs[0].kind, AmbiguityKind::Intersection);
        assert_eq!(ambs[0].position, 1);
        // zyx contains yx
        let s = RelationSet::new(l.clone(), [b(&l, &z, &b(&l, &y, &x)), b(&l, &y, &x)]).unwrap();
        let ambs = s.find_ambiguities(6).unwrap();
        assert_eq!(ambs.len(), 1);
        assert_eq!(ambs[0].kind, AmbiguityKind::Inclusion);
        assert_eq!(lie_composition(&s, &ambs[0]).unwrap(), LiePoly::zero());
        assert!(s.find_ambiguities(2).unwrap().is_empty());
    }

    #[test]
    fn odd_square_families() {
        let l = lie("y:1,x:1");
        let (x, y) = (g(&l, "x"), g(&l, "y"));
        let s = RelationSet::new(l.clone(), [b(&l, &x, &x), b(&l, &x, &y)]).unwrap();
        let ambs = s.find_ambiguities(3).unwrap();
        let seen: Vec<(String, AmbiguityKind)> = ambs
            .iter()
            .map(|a| (l.alphabet().format_word(&a.w), a.kind))
            .collect();
        assert_eq!(
            seen,
            [
                ("xxy".to_string(), AmbiguityKind::Intersection),
                ("xxx".to_string(), AmbiguityKind::Square)
            ]
        );
        for a in &ambs {
            let r = composition_report(&s, a).unwrap();
            assert!(r.trivial, "{:?}", r);
        }
    }

    #[test]
    fn assoc_composition_examples() {
        let l = lie("u:0,z:0,y:0,x:0");
        let a = l.alphabet();
        let p = |terms: &[(&str, i64)]| -> AssocPoly {
            terms.iter().map(|(w, c)| (a.parse_word(w).unwrap(), q(*c))).collect()
        };
        let f = p(&[("xy", 1), ("z", -1)]);
        let gp = p(&[("yz", 1), ("u", -1)]);
        let w = a.parse_word("xyz").unwrap();
        let c = assoc_composition(&f, &gp, &w, AmbiguityKind::Intersection, 1).unwrap();
        assert_eq!(c, p(&[("zz", -1), ("xu", 1)]));
        let c = assoc_composition(&f, &f, &a.parse_word("xy").unwrap(), AmbiguityKind::Inclusion, 0).unwrap();
        assert!(c.is_zero());
        assert!(assoc_composition(&f, &gp, &w, AmbiguityKind::Intersection, 0).is_err());
        let nm = p(&[("xy", 2)]);
        assert!(matches!(
            assoc_composition(&nm, &gp, &w, AmbiguityKind::Intersection, 1),
            Err(Error::NotMonic(_))
        ));
    }

    #[test]
    fn invalid_ambiguity_rejected() {
        let l = lie("x:0,y:0,z:0");
        let (x, y, z) = (g(&l, "x"), g(&l, "y"), g(&l, "z"));
        let s = RelationSet::new(l.clone(), [b(&l, &z, &y), b(&l, &y, &x)]).unwrap();
        let mut amb = s.find_ambiguities(6).unwrap().remove(0);
        amb.position = 0;
        assert!(matches!(lie_composition(&s, &amb), Err(Error::InvalidAmbiguity(_))));
        amb.f = 9;
        assert!(matches!(lie_composition(&s, &amb), Err(Error::InvalidAmbiguity(_))));
    }

    #[test]
    fn reduce_single_step() {
        let l = lie("f:0,e:1,t:1");
        let (f, e, t) = (g(&l, "f"), g(&l, "e"), g(&l, "t"));
        let s = RelationSet::new(l.clone(), [b(&l, &t, &e).sub(&f)]).unwrap();
        let red = reduce_traced(&b(&l, &t, &e), &s).unwrap();
        assert_eq!(red.remainder, f);
        assert_eq!(red.steps.len(), 1);
        assert_eq!(words(&l, &[red.steps[0].word.clone()]), ["te"]);
    }

    #[test]
    fn completion_log_and_irreducibles() {
        let l = lie("y:0,z:0,x:1");
        let (x, y, z) = (g(&l, "x"), g(&l, "y"), g(&l, "z"));
        let rel = b(&l, &x, &x).sub(&b(&l, &z, &y));
        let s = RelationSet::new(l.clone(), [rel]).unwrap();
        let (c, log) = complete(&s, 5).unwrap();
        assert_eq!(words(&l, &log.added().cloned().collect::<Vec<_>>()), ["xzy"]);
        let text = log.render(&l);
        assert!(text.lines().all(|line| line.split(' ').count() == 5), "{text}");
        let irr = irreducible_words(&c, 3).unwrap();
        assert!(irr.iter().all(|u| !c.is_reducible(u)));
        assert!(matches!(irreducible_words(&s, 3), Err(Error::NotCompleted { .. })));
        assert!(matches!(normal_form(&x, &c), Ok(_)));
    }

    #[test]
    fn bound_below_relation_degree() {
        let l = lie("x:0,y:0");
        let (x, y) = (g(&l, "x"), g(&l, "y"));
        let s = RelationSet::new(l.clone(), [b(&l, &y, &b(&l, &y, &x))]).unwrap();
        assert!(matches!(complete(&s, 2), Err(Error::BoundTooSmall(_))));
    }

    #[test]
    fn relation_cap() {
        let l = lie("y:0,z:0,x:1");
        let (x, y, z) = (g(&l, "x"), g(&l, "y"), g(&l, "z"));
        let s = RelationSet::new(l.clone(), [b(&l, &x, &x).sub(&b(&l, &z, &y))]).unwrap();
        assert!(matches!(complete_capped(&s, 9, 1), Err(Error::RelationCap(1))));
    }

    // ----- quotient-dimension oracle -----

    /// `dim (L/I)_n` for `n <= max`, with `I` spanned by iterated brackets of
    /// homogeneous relations with generators.
    fn quotient_dims(l: &FreeLie, rels: &[LiePoly], max: usize) -> Vec<usize> {
        let k = l.alphabet().len() as Letter;
        let mut free = vec![0usize; max + 1];
        for u in enumerate_super_ls_words(l.alphabet(), max) {
            free[u.len()] += 1;
        }
        let mut ideal: Vec<Echelon<Lie>> = (0..=max).map(|_| Echelon::new()).collect();
        let mut layer: Vec<Vec<LiePoly>> = vec![Vec::new(); max + 1];
        for r in rels {
            let d = r.degree();
            if d <= max && ideal[d].insert(r) {
                layer[d].push(r.clone());
            }
        }
        for n in 1..max {
            let cur = layer[n].clone();
            for p in &cur {
                for x in 0..k {
                    let v = l.superbracket(&l.generator(x), p);
                    if ideal[n + 1].insert(&v) {
                        layer[n + 1].push(v);
                    }
                }
            }
        }
        (0..=max).map(|n| free[n] - ideal[n].rank()).collect()
    }

    fn gs_dims(s: &RelationSet, max: usize) -> Vec<usize> {
        let mut out = vec![0; max + 1];
        for u in irreducible_words(s, max).unwrap() {
            out[u.len()] += 1;
        }
        out
    }

    fn random_homogeneous(l: &FreeLie, rng: &mut ChaCha8Rng, deg: usize) -> LiePoly {
        let basis: Vec<Word> = enumerate_super_ls_words(l.alphabet(), deg)
            .into_iter()
            .filter(|u| u.len() == deg)
            .collect();
        let parity = l.alphabet().word_parity(&basis[rng.gen_range(0..basis.len())]);
        let mut p = LiePoly::zero();
        for u in basis.iter().filter(|u| l.alphabet().word_parity(u) == parity) {
            if rng.gen_bool(0.6) {
                p.add_term(u.clone(), q(rng.gen_range(-2..=2)));
            }
        }
        p
    }

    #[test]
    fn completion_matches_quotient_dimensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut tried = 0;
        for spec in ["x:0,y:0", "x:1,y:0", "x:1,y:1", "x:0,y:1,z:0"] {
            let l = lie(spec);
            for _ in 0..6 {
                let rels: Vec<LiePoly> = (0..rng.gen_range(1..=2))
                    .map(|_| { let d = rng.gen_range(2..=3); random_homogeneous(&l, &mut rng, d) })
                    .filter(|p| !p.is_zero())
                    .collect();
                if rels.is_empty() {
                    continue;
                }
                let max = 6;
                let s = RelationSet::new(l.clone(), rels.clone()).unwrap();
                let (c, _) = complete(&s, max).unwrap();
                assert_eq!(gs_dims(&c, max), quotient_dims(&l, &rels, max), "{spec}: {rels:?}");
                tried += 1;
            }
        }
        assert!(tried >= 15);
    }

    #[test]
    fn reduction_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let l = lie("x:1,y:0,z:1");
        let rels = vec![random_homogeneous(&l, &mut rng, 2), random_homogeneous(&l, &mut rng, 3)];
        let rels: Vec<LiePoly> = rels.into_iter().filter(|p| !p.is_zero()).collect();
        let s = RelationSet::new(l.clone(), rels).unwrap();
        let (c, _) = complete(&s, 5).unwrap();
        for _ in 0..30 {
            let deg = rng.gen_range(1..=5);
            let f = random_homogeneous(&l, &mut rng, deg);
            let red = reduce_traced(&f, &c).unwrap();
            assert_eq!(reduce(&red.remainder, &c).unwrap(), red.remainder);
            assert!(red.remainder.words().all(|u| !c.is_reducible(u)));
            assert_eq!(f.sub(&red.remainder), reconstruct(&c, &red.steps).unwrap());
            let mut last: Option<Word> = None;
            for st in &red.steps {
                assert!(last.as_ref().is_none_or(|w| st.word < *w));
                last = Some(st.word.clone());
            }
        }
    }

    #[test]
    fn completion_is_order_insensitive() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let l = lie("x:1,y:0,z:0");
        for _ in 0..5 {
            let mut rels: Vec<LiePoly> = (0..3)
                .map(|_| { let d = rng.gen_range(2..=3); random_homogeneous(&l, &mut rng, d) })
                .filter(|p| !p.is_zero())
                .collect();
            let (a, _) = complete(&RelationSet::new(l.clone(), rels.clone()).unwrap(), 5).unwrap();
            rels.reverse();
            let (b, _) = complete(&RelationSet::new(l.clone(), rels).unwrap(), 5).unwrap();
            let pa: Vec<&LiePoly> = a.relations().iter().map(|r| &r.poly).collect();
            let pb: Vec<&LiePoly> = b.relations().iter().map(|r| &r.poly).collect();
            assert_eq!(pa, pb);
        }
    }

    #[test]
    fn fp_completion_matches_rational_shape() {
        let l = Arc::new(FreeLie::new(
            Arc::new(Alphabet::parse_spec("x:1,y:0,z:0").unwrap()),
            Field::prime(7).unwrap(),
        ));
        let (x, y, z) = (g(&l, "x"), g(&l, "y"), g(&l, "z"));
        let rel = b(&l, &x, &x).sub(&b(&l, &z, &y));
        let s = RelationSet::new(l.clone(), [rel.clone()]).unwrap();
        let (c, _) = complete(&s, 5).unwrap();
        assert_eq!(gs_dims(&c, 5), quotient_dims(&l, &[rel], 5));
    }
}
