//! The `superlie` command line: algebra files, expressions and reports.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gsb::{complete, normal_form, Completed, CompletionLog, RelationSet};
use crate::liepoly::{parse_rational, reduce_traced, Field, FreeLie, LiePoly, Scalar};
use crate::lyndon::{enumerate_super_ls_words, standard_bracketing};
use crate::superalg::{
    composition_survey, embedding_check, hnn_presentation, structure_presentation,
    two_gen_membership_check, two_generator_presentation, validate_derivation,
    validate_structure, validate_subalgebra, DerivationSpec, Family, Presentation,
    StructureAlgebra, SubalgebraSpec, ValidationReport, Vector,
};
use crate::words::{Alphabet, Letter, Parity};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    pub name: String,
    pub parity: u8,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TermEntry {
    pub coef: String,
    pub gen: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub left: String,
    pub right: String,
    pub value: Vec<TermEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ImageEntry {
    pub gen: String,
    pub value: Vec<TermEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct DerivationEntry {
    pub parity: u8,
    pub images: Vec<ImageEntry>,
}

/// The JSON algebra file.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub field: String,
    pub generators: Vec<GeneratorEntry>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subalgebra: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivation: Option<DerivationEntry>,
}

#[derive(Clone, Debug)]
pub struct AlgebraInput {
    pub algebra: StructureAlgebra,
    pub subalgebra: Option<SubalgebraSpec>,
    pub derivation: Option<DerivationSpec>,
}

fn parity_of(bit: u8, path: &str) -> Result<Parity> {
    Parity::from_bit(bit).ok_or_else(|| Error::Validation(format!("{path}: parity must be 0 or 1, got {bit}")))
}

fn letter_of(alphabet: &Alphabet, name: &str, path: &str) -> Result<Letter> {
    alphabet
        .letter(name)
        .ok_or_else(|| Error::Validation(format!("{path}: unknown generator {name:?}")))
}

fn vector_of(alphabet: &Alphabet, field: Field, terms: &[TermEntry], path: &str) -> Result<Vector> {
    let mut v = Vector::new();
    for (j, t) in terms.iter().enumerate() {
        let p = format!("{path}.value[{j}]");
        let l = letter_of(alphabet, &t.gen, &format!("{p}.gen"))?;
        let c = parse_rational(&t.coef)
            .and_then(|q| field.element(&q))
            .map_err(|e| Error::Validation(format!("{p}.coef: {e}")))?;
        let sum = v.get(&l).map_or(c.clone(), |x| x + &c);
        if sum.is_zero() {
            v.remove(&l);
        } else {
            v.insert(l, sum);
        }
    }
    Ok(v)
}

/// Reads the JSON text of an algebra file. Malformed JSON is a parse error;
/// anything that parses but does not describe an algebra is a validation
/// error naming the offending field.
pub fn parse_algebra(text: &str) -> Result<AlgebraInput> {
    let file: AlgebraFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let field = Field::parse(&file.field)?;
    let mut gens = Vec::new();
    for (i, g) in file.generators.iter().enumerate() {
        gens.push((g.name.clone(), parity_of(g.parity, &format!("generators[{i}].parity"))?));
    }
    let alphabet = Arc::new(Alphabet::new(gens)?);
    let mut algebra = StructureAlgebra::new(alphabet.clone(), field);
    for (i, b) in file.brackets.iter().enumerate() {
        let p = format!("brackets[{i}]");
        let x = letter_of(&alphabet, &b.left, &format!("{p}.left"))?;
        let y = letter_of(&alphabet, &b.right, &format!("{p}.right"))?;
        let v = vector_of(&alphabet, field, &b.value, &p)?;
        algebra
            .set_bracket(x, y, v)
            .map_err(|e| Error::Validation(format!("{p}: {e}")))?;
    }
    let subalgebra = match &file.subalgebra {
        None => None,
        Some(names) => {
            let mut members = Vec::new();
            for (i, n) in names.iter().enumerate() {
                let l = letter_of(&alphabet, n, &format!("subalgebra[{i}]"))?;
                if members.contains(&l) {
                    return Err(Error::Validation(format!("subalgebra[{i}]: {n:?} listed twice")));
                }
                members.push(l);
            }
            Some(SubalgebraSpec { members })
        }
    };
    let derivation = match &file.derivation {
        None => None,
        Some(d) => {
            let parity = parity_of(d.parity, "derivation.parity")?;
            let mut beta = BTreeMap::new();
            for (i, img) in d.images.iter().enumerate() {
                let p = format!("derivation.images[{i}]");
                let a = letter_of(&alphabet, &img.gen, &format!("{p}.gen"))?;
                if let Some(sub) = &subalgebra {
                    if !sub.contains(a) {
                        return Err(Error::Validation(format!(
                            "{p}.gen: {:?} is not in the subalgebra",
                            img.gen
                        )));
                    }
                }
                if beta.contains_key(&a) {
                    return Err(Error::Validation(format!("{p}.gen: {:?} given twice", img.gen)));
                }
                let v = vector_of(&alphabet, field, &img.value, &p)?;
                beta.insert(a, v);
            }
            beta.retain(|_, v: &mut Vector| !v.is_empty());
            Some(DerivationSpec { parity, beta })
        }
    };
    Ok(AlgebraInput {
        algebra,
        subalgebra,
        derivation,
    })
}

fn terms_of(alphabet: &Alphabet, v: &Vector) -> Vec<TermEntry> {
    v.iter()
        .map(|(&l, c)| TermEntry {
            coef: c.to_string(),
            gen: alphabet.name(l).to_string(),
        })
        .collect()
}

/// The canonical file: brackets as stored, ordered by `(left, right)`,
/// value terms ordered by generator.
pub fn to_file(input: &AlgebraInput) -> AlgebraFile {
    let l = &input.algebra;
    let a = l.alphabet();
    AlgebraFile {
        field: l.field().to_string(),
        generators: a
            .generators()
            .iter()
            .map(|g| GeneratorEntry {
                name: g.name.clone(),
                parity: g.parity.bit(),
            })
            .collect(),
        brackets: l
            .entries()
            .iter()
            .map(|(&(x, y), v)| BracketEntry {
                left: a.name(x).to_string(),
                right: a.name(y).to_string(),
                value: terms_of(a, v),
            })
            .collect(),
        subalgebra: input
            .subalgebra
            .as_ref()
            .map(|s| s.members.iter().map(|&m| a.name(m).to_string()).collect()),
        derivation: input.derivation.as_ref().map(|d| DerivationEntry {
            parity: d.parity.bit(),
            images: d
                .beta
                .iter()
                .map(|(&g, v)| ImageEntry {
                    gen: a.name(g).to_string(),
                    value: terms_of(a, v),
                })
                .collect(),
        }),
    }
}

pub fn serialize_algebra(input: &AlgebraInput) -> String {
    let mut out = serde_json::to_string_pretty(&to_file(input)).expect("serializable");
    out.push('\n');
    out
}

/// The presentation a file describes: the HNN-extension when a subalgebra or
/// derivation is given (missing parts default to all of `L` and `d = 0`),
/// otherwise the structure relations of `L` alone.
pub fn presentation_of(input: &AlgebraInput) -> Result<Presentation> {
    if input.subalgebra.is_none() && input.derivation.is_none() {
        return structure_presentation(&input.algebra);
    }
    let sub = input
        .subalgebra
        .clone()
        .unwrap_or_else(|| SubalgebraSpec::whole(&input.algebra));
    let d = input
        .derivation
        .clone()
        .unwrap_or_else(|| DerivationSpec::zero(Parity::Even));
    hnn_presentation(&input.algebra, &sub, &d)
}

// ----- expressions -----

struct ExprParser<'a> {
    lie: &'a FreeLie,
    chars: Vec<char>,
    pos: usize,
}

impl ExprParser<'_> {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn fail<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse(format!("{msg} at offset {}", self.pos)))
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(&format!("expected {c:?}"))
        }
    }

    fn expr(&mut self) -> Result<LiePoly> {
        let mut out = LiePoly::zero();
        let mut sign = Scalar::one();
        match self.peek() {
            Some('-') => {
                sign = -&sign;
                self.pos += 1;
            }
            Some('+') => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            out.add_scaled(&t, &self.lie.scalar(&sign));
            match self.peek() {
                Some('+') => sign = Scalar::one(),
                Some('-') => sign = -Scalar::one(),
                _ => return Ok(out),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<LiePoly> {
        let coef = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self
                    .chars
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_digit() || *c == '/' || *c == '.')
                {
                    self.pos += 1;
                }
                let text: String = self.chars[start..self.pos].iter().collect();
                let q = parse_rational(&text)?;
                self.expect('*')?;
                Some(self.lie.field().element(&q)?)
            }
            _ => None,
        };
        let atom = self.atom()?;
        Ok(match coef {
            Some(c) => atom.scaled(&c),
            None => atom,
        })
    }

    fn atom(&mut self) -> Result<LiePoly> {
        match self.peek() {
            Some('[') => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(']')?;
                Ok(self.lie.superbracket(&a, &b))
            }
            Some(c) if c.is_ascii_alphanumeric() || c == '_' => {
                let start = self.pos;
                while self
                    .chars
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                let l = self
                    .lie
                    .alphabet()
                    .letter(&name)
                    .ok_or(Error::UnknownGenerator(name))?;
                Ok(self.lie.generator(l))
            }
            _ => self.fail("expected a bracket or a generator name"),
        }
    }
}

/// Parses `expr := term (('+'|'-') term)*`, `term := [coef '*'] atom`,
/// `atom := '[' expr ',' expr ']' | name`.
pub fn parse_expr(lie: &FreeLie, text: &str) -> Result<LiePoly> {
    let mut p = ExprParser {
        lie,
        chars: text.chars().collect(),
        pos: 0,
    };
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.fail("trailing input");
    }
    Ok(out)
}

// ----- commands -----

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "superlie", version, about = "Gröbner–Shirshov bases for Lie superalgebras and their HNN-extensions")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write human-readable extras to stderr.
    #[arg(long, global = true)]
    pub log: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the structure constants, subalgebra and derivation of a file.
    Validate { file: PathBuf },
    /// List super-LS words and per-length counts.
    Basis {
        /// `name:parity,...` in ascending order.
        #[arg(long)]
        alphabet: String,
        #[arg(long)]
        max_len: usize,
    },
    /// Standard bracketing and envelope expansion of a super-LS word.
    Bracket {
        #[arg(long)]
        alphabet: String,
        #[arg(long)]
        word: String,
    },
    /// Every composition of the file's presentation, by family.
    Compose {
        file: PathBuf,
        /// Only ambiguities of at most this length.
        #[arg(long)]
        max_deg: Option<usize>,
    },
    /// Complete the presentation up to a degree.
    Complete {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_deg: usize,
    },
    /// Normal form of an expression modulo the completed presentation.
    NormalForm {
        file: PathBuf,
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = 6)]
        max_deg: usize,
    },
    /// Check that the base algebra embeds into the extension up to a degree.
    EmbedCheck {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_deg: usize,
    },
    /// Two-generator embedding and membership report.
    TwoGen {
        file: PathBuf,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        max_deg: usize,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        a_parity: Option<u8>,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        b_parity: Option<u8>,
    },
}

/// What a command produced.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub json: Value,
    /// Extras printed to stderr under `--log`.
    pub log: String,
    /// `false` maps to exit code 1.
    pub ok: bool,
}

impl Outcome {
    fn new(text: String, json: Value, ok: bool) -> Outcome {
        Outcome {
            text,
            json,
            log: String::new(),
            ok,
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => 2,
        Error::RelationCap(_) | Error::BoundTooSmall(_) | Error::NotCompleted { .. } => 3,
        _ => 1,
    }
}

fn read_input(path: &Path) -> Result<AlgebraInput> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_algebra(&text)
}

fn report_json(r: &ValidationReport) -> Value {
    json!({ "valid": r.is_valid(), "violations": r.violations })
}

fn report_text(name: &str, r: &ValidationReport, out: &mut String) {
    if r.is_valid() {
        out.push_str(&format!("{name}: valid\n"));
    } else {
        out.push_str(&format!("{name}: invalid\n"));
        for v in &r.violations {
            out.push_str(&format!("  {v}\n"));
        }
    }
}

fn cmd_validate(file: &Path) -> Result<Outcome> {
    let input = read_input(file)?;
    let l = &input.algebra;
    let mut text = String::new();
    let mut j = serde_json::Map::new();
    let structure = validate_structure(l);
    report_text("structure", &structure, &mut text);
    j.insert("structure".into(), report_json(&structure));
    let mut ok = structure.is_valid();
    let sub = input.subalgebra.clone().unwrap_or_else(|| SubalgebraSpec::whole(l));
    if input.subalgebra.is_some() {
        let r = validate_subalgebra(l, &sub);
        report_text("subalgebra", &r, &mut text);
        j.insert("subalgebra".into(), report_json(&r));
        ok &= r.is_valid();
    }
    if let Some(d) = &input.derivation {
        let r = validate_derivation(l, &sub, d);
        report_text("derivation", &r, &mut text);
        j.insert("derivation".into(), report_json(&r));
        ok &= r.is_valid();
    }
    j.insert("valid".into(), Value::Bool(ok));
    Ok(Outcome::new(text, Value::Object(j), ok))
}

fn cmd_basis(alphabet: &str, max_len: usize) -> Result<Outcome> {
    let a = Alphabet::parse_spec(alphabet)?;
    let words = enumerate_super_ls_words(&a, max_len);
    let mut counts = vec![0usize; max_len];
    for u in &words {
        counts[u.len() - 1] += 1;
    }
    let names: Vec<String> = words.iter().map(|u| a.format_word(u)).collect();
    let mut text: String = names.iter().map(|n| format!("{n}\n")).collect();
    let joined: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
    text.push_str(&format!("counts: {}\n", joined.join(",")));
    Ok(Outcome::new(text, json!({ "words": names, "counts": counts }), true))
}

fn cmd_bracket(alphabet: &str, word: &str) -> Result<Outcome> {
    let a = Arc::new(Alphabet::parse_spec(alphabet)?);
    let u = a.parse_word(word)?;
    let b = standard_bracketing(&a, &u)?;
    let lie = FreeLie::new(a.clone(), Field::Rational);
    let expansion = lie.format_assoc(&lie.expand_monomial(&b.monomial));
    let monomial = a.format_monomial(&b.monomial);
    let text = format!(
        "standard: {monomial}\nleading coefficient: {}\nexpansion: {expansion}\n",
        b.leading_coefficient
    );
    let j = json!({
        "word": a.format_word(&u),
        "standard": monomial,
        "leading_coefficient": b.leading_coefficient,
        "expansion": expansion,
    });
    Ok(Outcome::new(text, j, true))
}

fn cmd_compose(file: &Path, max_deg: Option<usize>) -> Result<Outcome> {
    let input = read_input(file)?;
    let p = presentation_of(&input)?;
    let survey = composition_survey(&p)?;
    let a = p.alphabet();
    let lie = &p.lie;
    let entries: Vec<_> = survey
        .entries
        .iter()
        .filter(|e| max_deg.is_none_or(|d| e.report.w.len() <= d))
        .collect();
    let mut text = String::new();
    let mut families = Vec::new();
    for fam in Family::ALL {
        let of: Vec<_> = entries.iter().filter(|e| e.family == fam).collect();
        let trivial = of.iter().filter(|e| e.report.trivial).count();
        text.push_str(&format!(
            "{fam}: {} total, {trivial} trivial, {} nontrivial\n",
            of.len(),
            of.len() - trivial
        ));
        families.push(json!({
            "family": fam.name(),
            "total": of.len(),
            "trivial": trivial,
            "nontrivial": of.len() - trivial,
        }));
    }
    let mut items = Vec::new();
    for e in &entries {
        let r = &e.report;
        let lead = r
            .leading_word_of_value
            .as_ref()
            .map_or("0".to_string(), |w| a.format_word(w));
        let status = if r.trivial { "trivial" } else { "nontrivial" };
        let value = lie.format_poly(&r.value);
        let remainder = lie.format_poly(&r.remainder);
        text.push_str(&format!(
            "{} w={} {}/{} {status} lead={lead} value={value} remainder={remainder}\n",
            e.family,
            a.format_word(&r.w),
            e.f_label,
            e.g_label
        ));
        items.push(json!({
            "family": e.family.name(),
            "w": a.format_word(&r.w),
            "kind": r.kind,
            "f": e.f_label,
            "g": e.g_label,
            "trivial": r.trivial,
            "lead": lead,
            "value": value,
            "remainder": remainder,
        }));
    }
    Ok(Outcome::new(text, json!({ "families": families, "compositions": items }), true))
}

fn completed_json(c: Completed) -> Value {
    match c {
        Completed::Unchecked => json!("unchecked"),
        Completed::UpTo(d) => json!({ "up_to": d }),
        Completed::All => json!("all"),
    }
}

fn completed_text(c: Completed) -> String {
    match c {
        Completed::Unchecked => "unchecked".into(),
        Completed::UpTo(d) => format!("up to degree {d}"),
        Completed::All => "all degrees".into(),
    }
}

fn log_json(log: &CompletionLog, lie: &FreeLie) -> Value {
    let a = lie.alphabet();
    Value::Array(
        log.entries
            .iter()
            .map(|e| {
                json!({
                    "w": a.format_word(&e.w),
                    "kind": e.kind,
                    "f": a.format_word(&e.f_lead),
                    "g": a.format_word(&e.g_lead),
                    "trivial": e.trivial,
                    "added": e.added.iter().map(|w| a.format_word(w)).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

fn relations_text(s: &RelationSet) -> (String, Value) {
    let lie = s.lie();
    let a = lie.alphabet();
    let mut text = String::new();
    let mut items = Vec::new();
    for r in s.relations() {
        let lead = a.format_word(&r.lead);
        let poly = lie.format_poly(&r.poly);
        text.push_str(&format!("{lead}: {poly}\n"));
        items.push(json!({ "lead": lead, "poly": poly }));
    }
    (text, Value::Array(items))
}

fn cmd_complete(file: &Path, max_deg: usize) -> Result<Outcome> {
    let input = read_input(file)?;
    let p = presentation_of(&input)?;
    let (s, log) = complete(&p.relations, max_deg)?;
    let (rels, rels_json) = relations_text(&s);
    let text = format!(
        "completed: {}\nrelations: {}\n{rels}log:\n{}",
        completed_text(s.completed()),
        s.len(),
        log.render(&p.lie)
    );
    let j = json!({
        "completed": completed_json(s.completed()),
        "relations": rels_json,
        "log": log_json(&log, &p.lie),
    });
    let mut out = Outcome::new(text, j, true);
    out.log = format!(
        "{} ambiguities checked, {} relations added\n",
        log.entries.len(),
        log.added().count()
    );
    Ok(out)
}

fn cmd_normal_form(file: &Path, expr: &str, max_deg: usize) -> Result<Outcome> {
    let input = read_input(file)?;
    let p = presentation_of(&input)?;
    let f = parse_expr(&p.lie, expr)?;
    let (s, _) = complete(&p.relations, max_deg)?;
    let nf = normal_form(&f, &s)?;
    let a = p.alphabet();
    let mut log = String::new();
    for st in reduce_traced(&f, &s)?.steps {
        log.push_str(&format!(
            "eliminate {} with {} coefficient {}\n",
            a.format_word(&st.word),
            p.label_name(&s.relations()[st.relation].lead),
            st.coefficient
        ));
    }
    let text = format!("{}\n", p.lie.format_poly(&nf));
    let j = json!({
        "input": p.lie.format_poly(&f),
        "normal_form": p.lie.format_poly(&nf),
    });
    let mut out = Outcome::new(text, j, true);
    out.log = log;
    Ok(out)
}

fn cmd_embed_check(file: &Path, max_deg: usize) -> Result<Outcome> {
    let input = read_input(file)?;
    let p = presentation_of(&input)?;
    let r = embedding_check(&p, max_deg)?;
    let a = p.alphabet();
    let added: Vec<String> = r.added.iter().map(|w| a.format_word(w)).collect();
    let text = format!(
        "max_deg: {max_deg}\nadded: {}\nadded leading words of length >= 2: {}\nletters irreducible: {}\nresult: {}\n",
        if added.is_empty() { "-".to_string() } else { added.join(",") },
        r.added_degree_ok,
        r.letters_irreducible,
        if r.pass() { "pass" } else { "fail" }
    );
    let j = json!({
        "max_deg": max_deg,
        "added": added,
        "added_degree_ok": r.added_degree_ok,
        "letters_irreducible": r.letters_irreducible,
        "pass": r.pass(),
    });
    let mut out = Outcome::new(text, j, r.pass());
    out.log = r.log.render(&p.lie);
    Ok(out)
}

fn bits(p: (Parity, Parity, Parity)) -> String {
    format!("({},{},{})", p.0.bit(), p.1.bit(), p.2.bit())
}

fn cmd_two_gen(
    file: &Path,
    n_max: usize,
    max_deg: usize,
    a_parity: Option<u8>,
    b_parity: Option<u8>,
) -> Result<Outcome> {
    let input = read_input(file)?;
    let request = (a_parity.and_then(Parity::from_bit), b_parity.and_then(Parity::from_bit));
    let tg = two_generator_presentation(&input.algebra, n_max, request)?;
    let r = two_gen_membership_check(&tg, max_deg)?;
    let p = &tg.presentation;
    let a = p.alphabet();
    let consistent: Vec<String> = tg.consistent.iter().map(|&c| bits(c)).collect();
    let (rels, rels_json) = relations_text(&p.relations);
    let mut text = format!(
        "consistent parities (a,b,t): {}\nchosen: {}\nrelations:\n{rels}b in span: {}\n",
        consistent.join(" "),
        bits(tg.parities),
        r.b_in_span
    );
    let mut cs = Vec::new();
    for (i, (&c, &inside)) in tg.c.iter().zip(&r.c_in_span).enumerate() {
        text.push_str(&format!("c{} = {} in span: {inside}\n", i + 1, a.name(c)));
        cs.push(json!({ "n": i + 1, "gen": a.name(c), "in_span": inside }));
    }
    text.push_str(&format!(
        "c independent: {}\nspan dimension: {}\nresult: {}\n",
        r.c_independent,
        r.span_dim,
        if r.pass() { "pass" } else { "fail" }
    ));
    let j = json!({
        "consistent": consistent,
        "chosen": bits(tg.parities),
        "relations": rels_json,
        "b_in_span": r.b_in_span,
        "c": cs,
        "c_independent": r.c_independent,
        "span_dim": r.span_dim,
        "pass": r.pass(),
    });
    Ok(Outcome::new(text, j, r.pass()))
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Validate { file } => cmd_validate(file),
        Command::Basis { alphabet, max_len } => cmd_basis(alphabet, *max_len),
        Command::Bracket { alphabet, word } => cmd_bracket(alphabet, word),
        Command::Compose { file, max_deg } => cmd_compose(file, *max_deg),
        Command::Complete { file, max_deg } => cmd_complete(file, *max_deg),
        Command::NormalForm { file, expr, max_deg } => cmd_normal_form(file, expr, *max_deg),
        Command::EmbedCheck { file, max_deg } => cmd_embed_check(file, *max_deg),
        Command::TwoGen {
            file,
            n_max,
            max_deg,
            a_parity,
            b_parity,
        } => cmd_two_gen(file, *n_max, *max_deg, *a_parity, *b_parity),
    }
}

/// Parses `args`, runs the command and writes to the given streams.
/// Returns the exit code.
pub fn main_with(
    args: impl IntoIterator<Item = impl Into<OsString> + Clone>,
    stdout: &mut impl Write,
    stderr: &mut impl Write,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(if code == 0 { &mut *stdout as &mut dyn Write } else { stderr }, "{e}");
            return code;
        }
    };
    match run(&cli) {
        Ok(out) => {
            let body = match cli.format {
                Format::Text => out.text,
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&out.json).expect("serializable");
                    s.push('\n');
                    s
                }
            };
            let _ = stdout.write_all(body.as_bytes());
            if cli.log {
                let _ = stderr.write_all(out.log.as_bytes());
            }
            if out.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE_ONE: &str = r#"{
  "field": "Q",
  "generators": [
    {
      "name": "f",
      "parity": 0
    },
    {
      "name": "e",
      "parity": 1
    }
  ],
  "brackets": [
    {
      "left": "e",
      "right": "e",
      "value": [
        {
          "coef": "1",
          "gen": "f"
        }
      ]
    }
  ],
  "derivation": {
    "parity": 1,
    "images": [
      {
        "gen": "e",
        "value": [
          {
            "coef": "1",
            "gen": "f"
          }
        ]
      }
    ]
  }
}
"#;

    #[test]
    fn parse_one_one() {
        let input = parse_algebra(ONE_ONE).unwrap();
        let l = &input.algebra;
        assert_eq!(l.alpha(1, 1, 0), Scalar::one());
        assert_eq!(input.derivation.as_ref().unwrap().beta(1, 0), Scalar::one());
        assert_eq!(serialize_algebra(&input), ONE_ONE);
    }

    #[test]
    fn file_errors() {
        let dup = r#"{"field":"Q","generators":[{"name":"x","parity":0},{"name":"x","parity":1}]}"#;
        assert!(matches!(parse_algebra(dup), Err(Error::DuplicateGenerator(_))));
        let f3 = r#"{"field":"Fp:3","generators":[{"name":"x","parity":0}]}"#;
        let e = parse_algebra(f3).unwrap_err();
        assert!(e.to_string().contains("characteristic 2,3 unsupported"));
        assert_eq!(exit_code(&e), 1);
        let syntax = r#"{"field":"Q","generators":[}"#;
        assert_eq!(exit_code(&parse_algebra(syntax).unwrap_err()), 2);
        let unknown = r#"{"field":"Q","generators":[{"name":"x","parity":0}],"brackets":[{"left":"x","right":"y","value":[]}]}"#;
        let e = parse_algebra(unknown).unwrap_err();
        assert!(e.to_string().contains("brackets[0].right"), "{e}");
        let coef = r#"{"field":"Q","generators":[{"name":"x","parity":1}],"brackets":[{"left":"x","right":"x","value":[{"coef":"1/0","gen":"x"}]}]}"#;
        assert!(parse_algebra(coef).unwrap_err().to_string().contains("coef"));
        let both = r#"{"field":"Q","generators":[{"name":"x","parity":0},{"name":"y","parity":0}],
            "brackets":[{"left":"x","right":"y","value":[{"coef":"1","gen":"x"}]},
                        {"left":"y","right":"x","value":[{"coef":"1","gen":"x"}]}]}"#;
        assert!(parse_algebra(both).unwrap_err().to_string().contains("antisymmetry"));
    }

    #[test]
    fn fp_coefficients() {
        let text = r#"{"field":"Fp:7","generators":[{"name":"x","parity":1},{"name":"y","parity":0}],
            "brackets":[{"left":"x","right":"x","value":[{"coef":"-1/2","gen":"y"}]}]}"#;
        let input = parse_algebra(text).unwrap();
        assert_eq!(input.algebra.alpha(0, 0, 1).to_string(), "3");
    }

    #[test]
    fn expressions() {
        let lie = FreeLie::new(Arc::new(Alphabet::parse_spec("x:0,y:0,t1:1").unwrap()), Field::Rational);
        let f = parse_expr(&lie, " [y , x] - 3/2*x + y").unwrap();
        assert_eq!(lie.format_poly(&f), "[y,x] + y - 3/2*x");
        let g = parse_expr(&lie, "-[x,y]").unwrap();
        assert_eq!(lie.format_poly(&g), "[y,x]");
        assert_eq!(lie.format_poly(&parse_expr(&lie, "0.5*[t1,t1]").unwrap()), "1/2*[t1,t1]");
        assert!(matches!(parse_expr(&lie, "[x,z]"), Err(Error::UnknownGenerator(_))));
        assert!(matches!(parse_expr(&lie, "[x,y"), Err(Error::Parse(_))));
        assert!(matches!(parse_expr(&lie, "x y"), Err(Error::Parse(_))));
        assert!(matches!(parse_expr(&lie, "2"), Err(Error::Parse(_))));
    }

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with(
            std::iter::once("superlie").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn basis_one_odd() {
        let (code, out, _) = run_args(&["basis", "--alphabet", "x:1", "--max-len", "4"]);
        assert_eq!(code, 0);
        assert_eq!(out, "x\nxx\ncounts: 1,1,0,0\n");
    }

    #[test]
    fn bracket_command() {
        let (code, out, _) = run_args(&["bracket", "--alphabet", "y:0,x:0", "--word", "xxy"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().next().unwrap(), "standard: [x,[x,y]]");
        let (code, _, err) = run_args(&["bracket", "--alphabet", "y:0,x:0", "--word", "yx"]);
        assert_eq!(code, 1, "{err}");
        let (code, _, _) = run_args(&["bracket", "--alphabet", "y:2", "--word", "y"]);
        assert_eq!(code, 2);
    }
}
