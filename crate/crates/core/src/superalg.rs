//! Finite-dimensional Lie superalgebras given by structure constants,
//! HNN-extension presentations and the two-generator embedding.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gsb::{
    complete, composition_report, find_ambiguities, AmbiguityKind, CompletionLog,
    CompositionReport, RelationSet,
};
use crate::liepoly::{reduce, Echelon, Field, FreeLie, Lie, LiePoly, Scalar};
use crate::lyndon::{enumerate_super_ls_words, standard_bracketing};
use crate::words::{Alphabet, LieMonomial, Letter, Parity, Word};

/// A vector in the basis `X`.
pub type Vector = BTreeMap<Letter, Scalar>;

fn add_to(v: &mut Vector, l: Letter, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let sum = v.get(&l).map_or(c.clone(), |x| x + &c);
    if sum.is_zero() {
        v.remove(&l);
    } else {
        v.insert(l, sum);
    }
}

/// Structure constants `α_{xy}^v` over a graded basis. Entries are stored
/// as given; a missing `(x, y)` with `(y, x)` present is read through graded
/// antisymmetry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureAlgebra {
    alphabet: Arc<Alphabet>,
    field: Field,
    table: BTreeMap<(Letter, Letter), Vector>,
}

impl StructureAlgebra {
    pub fn new(alphabet: Arc<Alphabet>, field: Field) -> StructureAlgebra {
        StructureAlgebra {
            alphabet,
            field,
            table: BTreeMap::new(),
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.alphabet.len()
    }

    fn letters(&self) -> impl Iterator<Item = Letter> {
        0..self.alphabet.len() as Letter
    }

    fn antisym_sign(&self, x: Letter, y: Letter) -> Scalar {
        // α_xy = −(−1)^{|x||y|} α_yx
        Scalar::sign(!self.alphabet.parity(x).both_odd(self.alphabet.parity(y)))
    }

    /// Sets `[x, y]`. A pair given in both orders must agree with graded
    /// antisymmetry.
    pub fn set_bracket(
        &mut self,
        x: Letter,
        y: Letter,
        value: impl IntoIterator<Item = (Letter, Scalar)>,
    ) -> Result<()> {
        let mut v = Vector::new();
        for (l, c) in value {
            if l as usize >= self.dim() {
                return Err(Error::AlphabetMismatch {
                    letter: l,
                    size: self.dim(),
                });
            }
            add_to(&mut v, l, self.field.coerce(&c));
        }
        let name = |l| self.alphabet.name(l).to_string();
        if self.table.contains_key(&(x, y)) {
            return Err(Error::Validation(format!(
                "bracket [{},{}] given twice",
                name(x),
                name(y)
            )));
        }
        if x != y {
            if let Some(other) = self.table.get(&(y, x)) {
                let s = self.antisym_sign(x, y);
                let implied: Vector = other.iter().map(|(&l, c)| (l, c * &s)).collect();
                if implied != v {
                    return Err(Error::Validation(format!(
                        "brackets [{},{}] and [{},{}] violate graded antisymmetry",
                        name(x),
                        name(y),
                        name(y),
                        name(x)
                    )));
                }
            }
        }
        if !v.is_empty() {
            self.table.insert((x, y), v);
        }
        Ok(())
    }

    /// `[x, y]` in the basis.
    pub fn bracket(&self, x: Letter, y: Letter) -> Vector {
        if let Some(v) = self.table.get(&(x, y)) {
            return v.clone();
        }
        if x != y {
            if let Some(v) = self.table.get(&(y, x)) {
                let s = self.antisym_sign(x, y);
                return v.iter().map(|(&l, c)| (l, c * &s)).collect();
            }
        }
        Vector::new()
    }

    pub fn alpha(&self, x: Letter, y: Letter, v: Letter) -> Scalar {
        self.bracket(x, y).get(&v).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Bilinear extension of the bracket.
    pub fn bracket_vec(&self, u: &Vector, w: &Vector) -> Vector {
        let mut out = Vector::new();
        for (&x, a) in u {
            for (&y, b) in w {
                let ab = a * b;
                for (l, c) in self.bracket(x, y) {
                    add_to(&mut out, l, &c * &ab);
                }
            }
        }
        out
    }

    /// Entries as given, for serialization.
    pub fn entries(&self) -> &BTreeMap<(Letter, Letter), Vector> {
        &self.table
    }

    /// Nonzero brackets `[x, y]` with `x >= y`.
    pub fn canonical_entries(&self) -> Vec<(Letter, Letter, Vector)> {
        let mut out = Vec::new();
        for x in self.letters() {
            for y in 0..=x {
                let v = self.bracket(x, y);
                if !v.is_empty() {
                    out.push((x, y, v));
                }
            }
        }
        out
    }

    pub fn vector_parity(&self, v: &Vector) -> Result<Option<Parity>> {
        let mut out = None;
        for &l in v.keys() {
            let p = self.alphabet.parity(l);
            match out {
                Some(q) if q != p => return Err(Error::Inhomogeneous),
                _ => out = Some(p),
            }
        }
        Ok(out)
    }

    /// Direct sum; generator names must be disjoint.
    pub fn direct_sum(&self, other: &StructureAlgebra) -> Result<StructureAlgebra> {
        let gens = self
            .alphabet
            .generators()
            .iter()
            .chain(other.alphabet.generators())
            .map(|g| (g.name.clone(), g.parity));
        let alphabet = Arc::new(Alphabet::new(gens)?);
        let shift = self.dim() as Letter;
        let mut out = StructureAlgebra::new(alphabet, self.field);
        for (&(x, y), v) in &self.table {
            out.set_bracket(x, y, v.clone())?;
        }
        for (&(x, y), v) in &other.table {
            out.set_bracket(x + shift, y + shift, v.iter().map(|(&l, c)| (l + shift, c.clone())))?;
        }
        Ok(out)
    }
}

/// A graded subalgebra spanned by basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubalgebraSpec {
    pub members: Vec<Letter>,
}

impl SubalgebraSpec {
    pub fn whole(l: &StructureAlgebra) -> SubalgebraSpec {
        SubalgebraSpec {
            members: l.letters().collect(),
        }
    }

    pub fn contains(&self, x: Letter) -> bool {
        self.members.contains(&x)
    }
}

/// A homogeneous derivation `d: A → L`, `d(a) = Σ β_a^v v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationSpec {
    pub parity: Parity,
    pub beta: BTreeMap<Letter, Vector>,
}

impl DerivationSpec {
    pub fn zero(parity: Parity) -> DerivationSpec {
        DerivationSpec {
            parity,
            beta: BTreeMap::new(),
        }
    }

    pub fn image(&self, a: Letter) -> Vector {
        self.beta.get(&a).cloned().unwrap_or_default()
    }

    pub fn beta(&self, a: Letter, v: Letter) -> Scalar {
        self.beta
            .get(&a)
            .and_then(|m| m.get(&v))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, msg: String) {
        self.violations.push(msg);
    }

    fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::Validation(self.violations.join("; ")))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return writeln!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "violation: {v}")?;
        }
        Ok(())
    }
}

pub fn validate_structure(l: &StructureAlgebra) -> ValidationReport {
    let a = l.alphabet();
    let n = |x: Letter| a.name(x).to_string();
    let p = |x: Letter| a.parity(x);
    let mut report = ValidationReport::default();
    let xs: Vec<Letter> = l.letters().collect();

    for (&(x, y), v) in l.entries() {
        for (&u, c) in v {
            if p(x) + p(y) != p(u) {
                report.push(format!(
                    "homogeneity: α[{},{}]^{} = {c} but parities do not add up",
                    n(x),
                    n(y),
                    n(u)
                ));
            }
        }
        if x == y && !p(x).is_odd() {
            report.push(format!("[{},{}] must vanish for even {}", n(x), n(x), n(x)));
        }
    }
    for &x in &xs {
        for &y in &xs {
            if x >= y {
                continue;
            }
            if let (Some(u), Some(w)) = (l.table.get(&(x, y)), l.table.get(&(y, x))) {
                let s = l.antisym_sign(x, y);
                let implied: Vector = w.iter().map(|(&k, c)| (k, c * &s)).collect();
                if *u != implied {
                    report.push(format!("antisymmetry fails for [{},{}]", n(x), n(y)));
                }
            }
        }
    }
    // Σ_v (α_yz^v α_xv^u − α_xy^v α_vz^u − (−1)^{|x||y|} α_xz^v α_yv^u) = 0
    for &x in &xs {
        for &y in &xs {
            for &z in &xs {
                let yz = l.bracket(y, z);
                let xy = l.bracket(x, y);
                let xz = l.bracket(x, z);
                let sign = Scalar::sign(p(x).both_odd(p(y)));
                let mut total = Vector::new();
                for (&v, c) in &yz {
                    for (k, d) in l.bracket(x, v) {
                        add_to(&mut total, k, c * &d);
                    }
                }
                for (&v, c) in &xy {
                    for (k, d) in l.bracket(v, z) {
                        add_to(&mut total, k, -(c * &d));
                    }
                }
                for (&v, c) in &xz {
                    for (k, d) in l.bracket(y, v) {
                        add_to(&mut total, k, -(&(c * &d) * &sign));
                    }
                }
                for (k, c) in total {
                    report.push(format!(
                        "Jacobi fails at ({},{},{}): coefficient {c} on {}",
                        n(x),
                        n(y),
                        n(z),
                        n(k)
                    ));
                }
            }
        }
    }
    for &x in xs.iter().filter(|&&x| p(x).is_odd()) {
        let xx: Vector = l.bracket(x, x);
        let cube = l.bracket_vec(&Vector::from([(x, Scalar::one())]), &xx);
        if !cube.is_empty() {
            report.push(format!("[{0},[{0},{0}]] ≠ 0", n(x)));
        }
    }
    report
}

pub fn validate_subalgebra(l: &StructureAlgebra, sub: &SubalgebraSpec) -> ValidationReport {
    let a = l.alphabet();
    let mut report = ValidationReport::default();
    for &x in &sub.members {
        if x as usize >= l.dim() {
            report.push(format!("subalgebra member {x} out of range"));
        }
    }
    for &x in &sub.members {
        for &y in &sub.members {
            for &v in l.bracket(x, y).keys() {
                if !sub.contains(v) {
                    report.push(format!(
                        "subalgebra not closed: [{},{}] involves {}",
                        a.name(x),
                        a.name(y),
                        a.name(v)
                    ));
                }
            }
        }
    }
    report
}

pub fn validate_derivation(
    l: &StructureAlgebra,
    sub: &SubalgebraSpec,
    d: &DerivationSpec,
) -> ValidationReport {
    let a = l.alphabet();
    let n = |x: Letter| a.name(x).to_string();
    let p = |x: Letter| a.parity(x);
    let mut report = ValidationReport::default();
    let mut wrong_parity = Vec::new();
    for (&x, img) in &d.beta {
        if !sub.contains(x) {
            report.push(format!("derivation defined on {} outside the subalgebra", n(x)));
        }
        for &v in img.keys() {
            if p(x) + d.parity != p(v) {
                wrong_parity.push(format!("d({}) involves {}", n(x), n(v)));
            }
        }
    }
    if !wrong_parity.is_empty() {
        report.push(format!(
            "inhomogeneous derivation of declared parity {}: {}; run each parity component separately",
            d.parity,
            wrong_parity.join(", ")
        ));
    }
    // Σ_c α_ab^c β_c^u = Σ_v (β_a^v α_vb^u + (−1)^{|d||a|} β_b^v α_av^u)
    for &x in &sub.members {
        for &y in &sub.members {
            let mut diff = Vector::new();
            for (c, k) in l.bracket(x, y) {
                for (u, b) in d.image(c) {
                    add_to(&mut diff, u, &k * &b);
                }
            }
            for (v, b) in d.image(x) {
                for (u, k) in l.bracket(v, y) {
                    add_to(&mut diff, u, -(&b * &k));
                }
            }
            let sign = Scalar::sign(d.parity.both_odd(p(x)));
            for (v, b) in d.image(y) {
                for (u, k) in l.bracket(x, v) {
                    add_to(&mut diff, u, -(&(&b * &k) * &sign));
                }
            }
            if !diff.is_empty() {
                report.push(format!("derivation rule fails at ({},{})", n(x), n(y)));
            }
        }
    }
    report
}

/// `ad_z` restricted to `A`, for a homogeneous `z ∈ L`.
pub fn ad_derivation(l: &StructureAlgebra, sub: &SubalgebraSpec, z: &Vector) -> Result<DerivationSpec> {
    let parity = l
        .vector_parity(z)
        .map_err(|_| Error::InhomogeneousDerivation("ad of an inhomogeneous element".into()))?
        .unwrap_or(Parity::Even);
    let mut beta = BTreeMap::new();
    for &a in &sub.members {
        let img = l.bracket_vec(z, &Vector::from([(a, Scalar::one())]));
        if !img.is_empty() {
            beta.insert(a, img);
        }
    }
    Ok(DerivationSpec { parity, beta })
}

/// Which defining relation a leading word belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationLabel {
    /// `f_xy`, `x > y`
    Pair(Letter, Letter),
    /// `f_xx`, odd `x`
    Square(Letter),
    /// `g_a`
    Twist(Letter),
    /// anything else, e.g. the two-generator relations
    Other(String),
}

#[derive(Clone, Debug)]
pub struct Presentation {
    pub lie: Arc<FreeLie>,
    pub relations: RelationSet,
    /// Letters of `X`, in the order of the input algebra.
    pub base: Vec<Letter>,
    pub subalgebra: Vec<Letter>,
    pub t: Option<Letter>,
    pub labels: BTreeMap<Word, RelationLabel>,
}

impl Presentation {
    pub fn alphabet(&self) -> &Arc<Alphabet> {
        self.lie.alphabet()
    }

    pub fn label_name(&self, lead: &Word) -> String {
        let a = self.alphabet();
        match self.labels.get(lead) {
            Some(RelationLabel::Pair(x, y)) => format!("f_{}{}", a.name(*x), a.name(*y)),
            Some(RelationLabel::Square(x)) => format!("f_{0}{0}", a.name(*x)),
            Some(RelationLabel::Twist(x)) => format!("g_{}", a.name(*x)),
            Some(RelationLabel::Other(s)) => s.clone(),
            None => format!("s_{}", a.format_word(lead)),
        }
    }
}

fn fresh_name(taken: &[String], base: &str) -> String {
    let mut name = base.to_string();
    let mut i = 1;
    while taken.iter().any(|n| *n == name) {
        name = format!("{base}{i}");
        i += 1;
    }
    name
}

fn vector_poly(lie: &FreeLie, map: &[Letter], v: &Vector) -> LiePoly {
    v.iter()
        .map(|(&l, c)| (Word::letter(map[l as usize]), lie.scalar(c)))
        .collect()
}

/// `[x, y] − Σ α_xy^v v` in `lie`, with `map` sending basis letters of `L`
/// into `lie`'s alphabet.
fn structure_relation(lie: &FreeLie, l: &StructureAlgebra, map: &[Letter], x: Letter, y: Letter) -> LiePoly {
    let bx = lie.generator(map[x as usize]);
    let by = lie.generator(map[y as usize]);
    lie.superbracket(&bx, &by).sub(&vector_poly(lie, map, &l.bracket(x, y)))
}

fn structure_relations(
    lie: &FreeLie,
    l: &StructureAlgebra,
    map: &[Letter],
    labels: &mut BTreeMap<Word, RelationLabel>,
) -> Vec<LiePoly> {
    let mut out = Vec::new();
    let alphabet = lie.alphabet();
    for x in l.letters() {
        for y in l.letters() {
            let (mx, my) = (map[x as usize], map[y as usize]);
            if mx > my || (x == y && l.alphabet().parity(x).is_odd()) {
                let f = structure_relation(lie, l, map, x, y);
                let lead = Word::from(vec![mx, my]);
                debug_assert!(alphabet.check(&lead).is_ok());
                labels.insert(
                    lead,
                    if x == y {
                        RelationLabel::Square(mx)
                    } else {
                        RelationLabel::Pair(mx, my)
                    },
                );
                out.push(f);
            }
        }
    }
    out
}

fn validate_all(l: &StructureAlgebra, sub: &SubalgebraSpec, d: Option<&DerivationSpec>) -> Result<()> {
    validate_structure(l).into_result()?;
    validate_subalgebra(l, sub).into_result()?;
    if let Some(d) = d {
        let report = validate_derivation(l, sub, d);
        if report.violations.iter().any(|v| v.starts_with("inhomogeneous")) {
            return Err(Error::InhomogeneousDerivation(format!(
                "declared parity {} does not fit every image",
                d.parity
            )));
        }
        report.into_result()?;
    }
    Ok(())
}

/// The structure-constant presentation of `L` alone (no `t`).
pub fn structure_presentation(l: &StructureAlgebra) -> Result<Presentation> {
    validate_structure(l).into_result()?;
    let lie = Arc::new(FreeLie::new(l.alphabet().clone(), l.field()));
    let map: Vec<Letter> = l.letters().collect();
    let mut labels = BTreeMap::new();
    let rels = structure_relations(&lie, l, &map, &mut labels);
    let relations = RelationSet::new(lie.clone(), rels)?;
    Ok(Presentation {
        lie,
        relations,
        base: map,
        subalgebra: Vec::new(),
        t: None,
        labels,
    })
}

/// `⟨X, t | f_xy, f_xx, g_a⟩` over the order `B < X∖B < t`.
pub fn hnn_presentation(
    l: &StructureAlgebra,
    sub: &SubalgebraSpec,
    d: &DerivationSpec,
) -> Result<Presentation> {
    validate_all(l, sub, Some(d))?;
    let src = l.alphabet();
    let order: Vec<Letter> = sub
        .members
        .iter()
        .copied()
        .chain(l.letters().filter(|x| !sub.contains(*x)))
        .collect();
    let names: Vec<String> = src.generators().iter().map(|g| g.name.clone()).collect();
    let t_name = fresh_name(&names, "t");
    let mut gens: Vec<(String, Parity)> = order
        .iter()
        .map(|&x| (src.name(x).to_string(), src.parity(x)))
        .collect();
    gens.push((t_name, d.parity));
    let alphabet = Arc::new(Alphabet::new(gens)?);
    let lie = Arc::new(FreeLie::new(alphabet, l.field()));
    let mut map = vec![0 as Letter; l.dim()];
    for (rank, &x) in order.iter().enumerate() {
        map[x as usize] = rank as Letter;
    }
    let t = l.dim() as Letter;
    let mut labels = BTreeMap::new();
    let mut rels = structure_relations(&lie, l, &map, &mut labels);
    for &a in &sub.members {
        let g = lie
            .superbracket(&lie.generator(t), &lie.generator(map[a as usize]))
            .sub(&vector_poly(&lie, &map, &d.image(a)));
        labels.insert(Word::from(vec![t, map[a as usize]]), RelationLabel::Twist(map[a as usize]));
        rels.push(g);
    }
    let relations = RelationSet::new(lie.clone(), rels)?;
    Ok(Presentation {
        lie,
        relations,
        base: map,
        subalgebra: sub.members.iter().map(|&a| order.iter().position(|&x| x == a).unwrap() as Letter).collect(),
        t: Some(t),
        labels,
    })
}

/// The composition families of an HNN presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// `⟨f_xy, f_yz⟩_xyz`
    Xyz,
    /// `⟨f_xy, f_yy⟩_xyy`
    Xyy,
    /// `⟨f_xx, f_xy⟩_xxy`
    Xxy,
    /// `⟨g_a, f_ab⟩_tab`
    Tab,
    /// `⟨g_a, f_aa⟩_taa`
    Taa,
    /// `f_xx` against itself at `xxx`
    Xxx,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Xyz,
        Family::Xyy,
        Family::Xxy,
        Family::Tab,
        Family::Taa,
        Family::Xxx,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Xyz => "<f_xy,f_yz>_xyz",
            Family::Xyy => "<f_xy,f_yy>_xyy",
            Family::Xxy => "<f_xx,f_xy>_xxy",
            Family::Tab => "<g_a,f_ab>_tab",
            Family::Taa => "<g_a,f_aa>_taa",
            Family::Xxx => "<f_xx,f_xx>_xxx",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct SurveyEntry {
    pub family: Family,
    pub f_label: String,
    pub g_label: String,
    pub report: CompositionReport,
}

#[derive(Clone, Debug, Default)]
pub struct Survey {
    pub entries: Vec<SurveyEntry>,
}

impl Survey {
    pub fn family(&self, family: Family) -> impl Iterator<Item = &SurveyEntry> {
        self.entries.iter().filter(move |e| e.family == family)
    }
}

fn classify(p: &Presentation, f: usize, g: usize, kind: AmbiguityKind) -> Option<Family> {
    let rels = p.relations.relations();
    let lf = p.labels.get(&rels[f].lead)?;
    let lg = p.labels.get(&rels[g].lead)?;
    use RelationLabel::*;
    match (kind, lf, lg) {
        (AmbiguityKind::Intersection, Pair(_, y), Pair(y2, _)) if y == y2 => Some(Family::Xyz),
        (AmbiguityKind::Intersection, Pair(_, y), Square(y2)) if y == y2 => Some(Family::Xyy),
        (AmbiguityKind::Intersection, Square(x), Pair(x2, _)) if x == x2 => Some(Family::Xxy),
        (AmbiguityKind::Intersection, Twist(a), Pair(a2, _)) if a == a2 => Some(Family::Tab),
        (AmbiguityKind::Intersection, Twist(a), Square(a2)) if a == a2 => Some(Family::Taa),
        (AmbiguityKind::Square, Square(_), Square(_)) if f == g => Some(Family::Xxx),
        _ => None,
    }
}

/// Every ambiguity of the presentation, sorted into the families above.
pub fn composition_survey(p: &Presentation) -> Result<Survey> {
    let s = &p.relations;
    let max = 2 * s.relations().iter().map(|r| r.lead.len()).max().unwrap_or(0);
    let mut entries = Vec::new();
    for amb in find_ambiguities(s, max)? {
        let family = classify(p, amb.f, amb.g, amb.kind).ok_or_else(|| {
            Error::UnexpectedAmbiguity(format!(
                "{} ({}) between {} and {}",
                p.alphabet().format_word(&amb.w),
                amb.kind,
                p.label_name(&s.relations()[amb.f].lead),
                p.label_name(&s.relations()[amb.g].lead)
            ))
        })?;
        let report = composition_report(s, &amb)?;
        entries.push(SurveyEntry {
            family,
            f_label: p.label_name(&s.relations()[amb.f].lead),
            g_label: p.label_name(&s.relations()[amb.g].lead),
            report,
        });
    }
    entries.sort_by_key(|e| (e.family, e.report.w.clone()));
    Ok(Survey { entries })
}

#[derive(Clone, Debug)]
pub struct EmbeddingReport {
    pub max_deg: usize,
    pub completed: RelationSet,
    pub log: CompletionLog,
    pub added: Vec<Word>,
    /// Every added relation has a leading word of length at least 2.
    pub added_degree_ok: bool,
    /// Every letter of `X` is irreducible.
    pub letters_irreducible: bool,
}

impl EmbeddingReport {
    pub fn pass(&self) -> bool {
        self.added_degree_ok && self.letters_irreducible
    }
}

pub fn embedding_check(p: &Presentation, max_deg: usize) -> Result<EmbeddingReport> {
    let (completed, log) = complete(&p.relations, max_deg)?;
    let added: Vec<Word> = log.added().cloned().collect();
    let added_degree_ok = added.iter().all(|w| w.len() >= 2);
    let letters_irreducible = p
        .base
        .iter()
        .all(|&x| !completed.is_reducible(&Word::letter(x)));
    Ok(EmbeddingReport {
        max_deg,
        completed,
        log,
        added,
        added_degree_ok,
        letters_irreducible,
    })
}

/// Alphabet of abstract generators `z1, z2, …` with the parities of `elems`.
fn abstract_alphabet(lie: &FreeLie, elems: &[LiePoly]) -> Result<(Arc<Alphabet>, Vec<usize>)> {
    let mut gens = Vec::new();
    let mut weights = Vec::new();
    for (i, e) in elems.iter().enumerate() {
        let parity = e.parity(lie.alphabet())?.ok_or(Error::ZeroPolynomial)?;
        let parts = e.homogeneous_parts();
        if parts.len() != 1 {
            return Err(Error::Validation(format!("element {} is not homogeneous in degree", i + 1)));
        }
        gens.push((format!("z{}", i + 1), parity));
        weights.push(*parts.keys().next().expect("one part"));
    }
    Ok((Arc::new(Alphabet::new(gens)?), weights))
}

fn weight(u: &Word, weights: &[usize]) -> usize {
    u.letters().iter().map(|&l| weights[l as usize]).sum()
}

/// Evaluates a bracket tree over abstract generators.
fn eval_tree(lie: &FreeLie, values: &[LiePoly], tree: &LieMonomial) -> LiePoly {
    match tree {
        LieMonomial::Leaf(l) => values[*l as usize].clone(),
        LieMonomial::Node(a, b) => lie.superbracket(&eval_tree(lie, values, a), &eval_tree(lie, values, b)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FreeStatus {
    Free,
    /// First degree where the subalgebra is smaller than the free one.
    NotFree { degree: usize, expected: usize, found: usize },
    /// The bound is below the degree of some element.
    Indeterminate,
}

/// Compares, degree by degree up to `max_deg`, the subalgebra generated by
/// `elems` with the free Lie superalgebra on generators of the same degrees
/// and parities.
pub fn free_basis_check(lie: &FreeLie, elems: &[LiePoly], max_deg: usize) -> Result<FreeStatus> {
    let (z, weights) = abstract_alphabet(lie, elems)?;
    if weights.iter().any(|&w| w > max_deg) {
        return Ok(FreeStatus::Indeterminate);
    }
    let mut by_degree: BTreeMap<usize, (usize, Echelon<Lie>)> = BTreeMap::new();
    for u in enumerate_super_ls_words(&z, max_deg) {
        let deg = weight(&u, &weights);
        if deg > max_deg {
            continue;
        }
        let tree = standard_bracketing(&z, &u)?.monomial;
        let value = eval_tree(lie, elems, &tree);
        let slot = by_degree.entry(deg).or_default();
        slot.0 += 1;
        slot.1.insert(&value);
    }
    for (degree, (expected, ech)) in by_degree {
        if ech.rank() != expected {
            return Ok(FreeStatus::NotFree {
                degree,
                expected,
                found: ech.rank(),
            });
        }
    }
    Ok(FreeStatus::Free)
}

/// Applies the Leibniz rule along `tree`, returning `(value, d(value))`.
pub fn apply_derivation_tree(
    lie: &FreeLie,
    values: &[LiePoly],
    images: &[LiePoly],
    parity: Parity,
    tree: &LieMonomial,
) -> (LiePoly, LiePoly) {
    match tree {
        LieMonomial::Leaf(l) => (values[*l as usize].clone(), images[*l as usize].clone()),
        LieMonomial::Node(a, b) => {
            let (va, da) = apply_derivation_tree(lie, values, images, parity, a);
            let (vb, db) = apply_derivation_tree(lie, values, images, parity, b);
            let pa = va.parity(lie.alphabet()).ok().flatten().unwrap_or(Parity::Even);
            let sign = Scalar::sign(parity.both_odd(pa));
            let value = lie.superbracket(&va, &vb);
            let image = lie
                .superbracket(&da, &vb)
                .add(&lie.superbracket(&va, &db).scaled(&sign));
            (value, image)
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExtensionEntry {
    /// The basis element as a word over `z1, z2, …`.
    pub word: Word,
    pub value: LiePoly,
    pub image: LiePoly,
}

/// Extends `d(z_i) = images[i]` to the super-LS basis of the subalgebra
/// generated by `z` up to `max_deg`, checking that linear relations among
/// the values are respected and that an alternative bracketing agrees.
pub fn extend_derivation(
    lie: &FreeLie,
    z: &[LiePoly],
    images: &[LiePoly],
    parity: Parity,
    max_deg: usize,
) -> Result<Vec<ExtensionEntry>> {
    if z.len() != images.len() {
        return Err(Error::Validation("one image per generator required".into()));
    }
    let (za, weights) = abstract_alphabet(lie, z)?;
    for (i, (zi, di)) in z.iter().zip(images).enumerate() {
        let pz = zi.parity(lie.alphabet())?.expect("nonzero");
        if let Some(pd) = di.parity(lie.alphabet()).map_err(|_| {
            Error::InhomogeneousDerivation(format!("image of z{} is inhomogeneous", i + 1))
        })? {
            if pd != pz + parity {
                return Err(Error::InhomogeneousDerivation(format!(
                    "image of z{} has parity {pd}, expected {}",
                    i + 1,
                    pz + parity
                )));
            }
        }
    }
    let mut out = Vec::new();
    let mut kernel = PairEchelon::default();
    for u in enumerate_super_ls_words(&za, max_deg) {
        if weight(&u, &weights) > max_deg {
            continue;
        }
        let tree = standard_bracketing(&za, &u)?.monomial;
        let (value, image) = apply_derivation_tree(lie, z, images, parity, &tree);
        if let Some(alt) = jacobi_expansion(&za, &tree) {
            let mut v2 = LiePoly::zero();
            let mut d2 = LiePoly::zero();
            for (c, t) in &alt {
                let (v, d) = apply_derivation_tree(lie, z, images, parity, t);
                v2.add_scaled(&v, c);
                d2.add_scaled(&d, c);
            }
            if v2 != value || d2 != image {
                return Err(Error::InconsistentDerivation(format!(
                    "bracketings of {} disagree",
                    za.format_word(&u)
                )));
            }
        }
        kernel.insert(&value, &image).map_err(|_| {
            Error::InconsistentDerivation(format!(
                "a linear relation through {} is not preserved",
                za.format_word(&u)
            ))
        })?;
        out.push(ExtensionEntry { word: u, value, image });
    }
    Ok(out)
}

/// `[A, [B, C]] = [[A, B], C] + (−1)^{|A||B|}[B, [A, C]]`.
fn jacobi_expansion(alphabet: &Alphabet, tree: &LieMonomial) -> Option<Vec<(Scalar, LieMonomial)>> {
    let LieMonomial::Node(a, bc) = tree else {
        return None;
    };
    let LieMonomial::Node(b, c) = bc.as_ref() else {
        return None;
    };
    let (a, b, c) = (a.as_ref().clone(), b.as_ref().clone(), c.as_ref().clone());
    let sign = Scalar::sign(a.parity(alphabet).both_odd(b.parity(alphabet)));
    Some(vec![
        (Scalar::one(), LieMonomial::node(LieMonomial::node(a.clone(), b.clone()), c.clone())),
        (sign, LieMonomial::node(b, LieMonomial::node(a, c))),
    ])
}

/// Elimination on pairs `(value, image)` keyed by the value.
#[derive(Default)]
struct PairEchelon {
    rows: BTreeMap<Word, (LiePoly, LiePoly)>,
}

impl PairEchelon {
    fn insert(&mut self, value: &LiePoly, image: &LiePoly) -> std::result::Result<(), ()> {
        let mut v = value.clone();
        let mut i = image.clone();
        for (lead, (rv, ri)) in self.rows.iter().rev() {
            let c = v.coeff(lead);
            if !c.is_zero() {
                let k = -(&c / &rv.coeff(lead));
                v.add_scaled(rv, &k);
                i.add_scaled(ri, &k);
            }
        }
        match v.leading() {
            Some((lead, _)) => {
                self.rows.insert(lead.clone(), (v.clone(), i));
                Ok(())
            }
            None if i.is_zero() => Ok(()),
            None => Err(()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TwoGenPresentation {
    pub presentation: Presentation,
    pub a: Letter,
    pub b: Letter,
    pub t: Letter,
    /// Letters of `c_1, …, c_k` in the presentation alphabet.
    pub c: Vec<Letter>,
    /// The chosen parities of `(a, b, t)`.
    pub parities: (Parity, Parity, Parity),
    /// Every consistent assignment, ascending.
    pub consistent: Vec<(Parity, Parity, Parity)>,
}

/// All assignments of parities to `(a, b, t)` with `|t| + |a| = |b|` and
/// `|t| + n|b| + |a| = |c_n|`.
pub fn consistent_parities(c: &[Parity]) -> Vec<(Parity, Parity, Parity)> {
    let mut out = Vec::new();
    for bits in 0..8u8 {
        let pa = Parity::from_bit((bits >> 2) & 1).expect("bit");
        let pb = Parity::from_bit((bits >> 1) & 1).expect("bit");
        let pt = Parity::from_bit(bits & 1).expect("bit");
        let ok = pt + pa == pb
            && c.iter().enumerate().all(|(i, &pc)| {
                let n = i + 1;
                let nb = if n % 2 == 1 { pb } else { Parity::Even };
                pt + nb + pa == pc
            });
        if ok {
            out.push((pa, pb, pt));
        }
    }
    out
}

/// `⟨X, a, b, t | structure relations of L, [t,a] = b, [t,[bⁿ,a]] = c_n⟩`
/// with `X < a < b < t` and no relations between `X` and `{a, b}`.
pub fn two_generator_presentation(
    l: &StructureAlgebra,
    n_max: usize,
    requested: (Option<Parity>, Option<Parity>),
) -> Result<TwoGenPresentation> {
    validate_structure(l).into_result()?;
    let k = l.dim();
    if k > n_max {
        return Err(Error::BoundTooSmall(format!(
            "the algebra has dimension {k} but n-max is {n_max}"
        )));
    }
    let src = l.alphabet();
    let c_parities: Vec<Parity> = l.letters().map(|x| src.parity(x)).collect();
    let consistent = consistent_parities(&c_parities);
    let chosen = consistent
        .iter()
        .copied()
        .find(|&(pa, pb, _)| {
            requested.0.is_none_or(|r| r == pa) && requested.1.is_none_or(|r| r == pb)
        })
        .ok_or_else(|| {
            let list: Vec<String> = consistent
                .iter()
                .map(|(a, b, t)| format!("(a,b,t)=({a},{b},{t})"))
                .collect();
            Error::ParityInconsistent(if list.is_empty() {
                "no assignment of parities to a, b, t satisfies all relations".into()
            } else {
                format!("requested parities are inconsistent; consistent: {}", list.join(", "))
            })
        })?;
    let mut names: Vec<String> = src.generators().iter().map(|g| g.name.clone()).collect();
    let mut gens: Vec<(String, Parity)> =
        src.generators().iter().map(|g| (g.name.clone(), g.parity)).collect();
    for (base, parity) in [("a", chosen.0), ("b", chosen.1), ("t", chosen.2)] {
        let n = fresh_name(&names, base);
        names.push(n.clone());
        gens.push((n, parity));
    }
    let alphabet = Arc::new(Alphabet::new(gens)?);
    let lie = Arc::new(FreeLie::new(alphabet, l.field()));
    let map: Vec<Letter> = l.letters().collect();
    let (a, b, t) = (k as Letter, k as Letter + 1, k as Letter + 2);
    let mut labels = BTreeMap::new();
    let mut rels = structure_relations(&lie, l, &map, &mut labels);
    let ga = lie.generator(a);
    let gb = lie.generator(b);
    let gt = lie.generator(t);
    rels.push(lie.superbracket(&gt, &ga).sub(&gb));
    labels.insert(
        Word::from(vec![t, a]),
        RelationLabel::Other("[t,a]-b".to_string()),
    );
    let mut bn_a = ga.clone();
    for n in 1..=k {
        bn_a = lie.superbracket(&gb, &bn_a);
        let rel = lie.superbracket(&gt, &bn_a).sub(&lie.generator(map[n - 1]));
        let lead = lie.leading_term(&rel)?.0;
        labels.insert(lead, RelationLabel::Other(format!("[t,[b^{n},a]]-c{n}")));
        rels.push(rel);
    }
    let relations = RelationSet::new(lie.clone(), rels)?;
    Ok(TwoGenPresentation {
        presentation: Presentation {
            lie,
            relations,
            base: map.clone(),
            subalgebra: Vec::new(),
            t: Some(t),
            labels,
        },
        a,
        b,
        t,
        c: map,
        parities: chosen,
        consistent,
    })
}

#[derive(Clone, Debug)]
pub struct MembershipReport {
    pub max_deg: usize,
    pub b_in_span: bool,
    pub c_in_span: Vec<bool>,
    pub c_independent: bool,
    /// Dimension of the computed span.
    pub span_dim: usize,
}

impl MembershipReport {
    pub fn pass(&self) -> bool {
        self.b_in_span && self.c_in_span.iter().all(|&x| x) && self.c_independent
    }
}

/// Closes `{a, t}` under `ad_a` and `ad_t` on normal forms modulo the
/// completed relations, keeping elements whose normal form has length at
/// most `max_deg`, and tests `b` and the `c_n` for membership.
pub fn two_gen_membership_check(p: &TwoGenPresentation, max_deg: usize) -> Result<MembershipReport> {
    let needed = p.c.len() + 2;
    if needed > max_deg {
        return Err(Error::BoundTooSmall(format!(
            "c_{} needs degree {needed}, bound is {max_deg}",
            p.c.len()
        )));
    }
    let lie = &p.presentation.lie;
    let (s, _) = complete(&p.presentation.relations, max_deg)?;
    let nf = |f: &LiePoly| reduce(f, &s);
    let gens = [lie.generator(p.a), lie.generator(p.t)];
    let mut span: Echelon<Lie> = Echelon::new();
    let mut queue: VecDeque<LiePoly> = VecDeque::new();
    for g in &gens {
        let g = nf(g)?;
        if span.insert(&g) {
            queue.push_back(g);
        }
    }
    while let Some(e) = queue.pop_front() {
        for g in &gens {
            let prod = nf(&lie.superbracket(g, &e))?;
            if prod.is_zero() || prod.degree() > max_deg {
                continue;
            }
            if span.insert(&prod) {
                queue.push_back(prod);
            }
        }
    }
    let b_in_span = span.contains(&nf(&lie.generator(p.b))?);
    let mut c_in_span = Vec::new();
    let mut indep: Echelon<Lie> = Echelon::new();
    let mut c_independent = true;
    for &c in &p.c {
        let v = nf(&lie.generator(c))?;
        c_in_span.push(span.contains(&v));
        c_independent &= indep.insert(&v);
    }
    Ok(MembershipReport {
        max_deg,
        b_in_span,
        c_in_span,
        c_independent,
        span_dim: span.rank(),
    })
}
