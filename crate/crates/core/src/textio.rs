//! The knowledge-base text format and report printers.
//!
//! ```text
//! # Example: two choices and a constraint from the ontology.
//! %ontology
//! ~c.
//! %rules
//! a :- not a'.
//! a' :- not a.
//! c :- a, not b.
//! ```
//!
//! Ontology formulas use `~ & | -> <->` (tightest first; `->` associates to
//! the right, the others to the left) and parentheses; `⊥` stands for
//! falsity. Rule bodies use `not` for default negation. Atom names match
//! `[a-z][A-Za-z0-9_']*`; names starting with an uppercase letter are
//! rejected, since only ground rules are supported.

use std::fmt::Write as _;

use serde_json::{json, Value};
use thiserror::Error;

use crate::aft::{InnerLog, StableTrace};
use crate::atoms::AtomSet;
use crate::entail::Formula;
use crate::kb::{KnowledgeBase, Literal, NamedRule};
use crate::lattice::{Approximation, Bi, Tetra};
use crate::phi::ModelVerdict;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Line and column (both 1-based) of a token.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

/// A parsed file before interning.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct KbDocument {
    pub ontology: Vec<Formula<String>>,
    pub rules: Vec<NamedRule>,
    /// Start of each ontology formula.
    pub ontology_pos: Vec<Pos>,
    /// Start of each rule.
    pub rule_pos: Vec<Pos>,
}

impl KbDocument {
    pub fn into_kb(self) -> KnowledgeBase {
        KnowledgeBase::new(self.ontology, self.rules)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Section(String),
    Tilde,
    Amp,
    Bar,
    Arrow,
    DoubleArrow,
    LParen,
    RParen,
    Dot,
    Comma,
    Neck,
    Bottom,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Section(s) => format!("`%{s}`"),
        Tok::Tilde => "`~`".into(),
        Tok::Amp => "`&`".into(),
        Tok::Bar => "`|`".into(),
        Tok::Arrow => "`->`".into(),
        Tok::DoubleArrow => "`<->`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Dot => "`.`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Neck => "`:-`".into(),
        Tok::Bottom => "`⊥`".into(),
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let pos = Pos {
                line: ln + 1,
                column: i + 1,
            };
            let err = |message: String| ParseError {
                line: pos.line,
                column: pos.column,
                message,
            };
            let c = chars[i];
            let rest: String = chars[i..].iter().take(3).collect();
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let (tok, len) = if c.is_ascii_lowercase() || c == '%' {
                let start = if c == '%' { i + 1 } else { i };
                let mut j = start;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                let word: String = chars[start..j].iter().collect();
                if c == '%' {
                    if word != "ontology" && word != "rules" {
                        return Err(err(format!(
                            "unknown section `%{word}` (expected %ontology or %rules)"
                        )));
                    }
                    (Tok::Section(word), j - i)
                } else {
                    (Tok::Ident(word), j - i)
                }
            } else if c.is_ascii_uppercase() || c == '_' {
                let mut j = i;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                return Err(err(format!(
                    "`{word}` looks like a variable; ground rules only"
                )));
            } else if rest.starts_with("<->") {
                (Tok::DoubleArrow, 3)
            } else if rest.starts_with("->") {
                (Tok::Arrow, 2)
            } else if rest.starts_with(":-") {
                (Tok::Neck, 2)
            } else {
                let t = match c {
                    '~' => Tok::Tilde,
                    '&' => Tok::Amp,
                    '|' => Tok::Bar,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '.' => Tok::Dot,
                    ',' => Tok::Comma,
                    '⊥' => Tok::Bottom,
                    _ => return Err(err(format!("unexpected character `{c}`"))),
                };
                (t, 1)
            };
            out.push((tok, pos));
            i += len;
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn error<T>(&self, message: String) -> Result<T, ParseError> {
        let p = self.pos();
        Err(ParseError {
            line: p.line,
            column: p.column,
            message,
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, ParseError> {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", describe(t))),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            self.unexpected(&describe(t))
        }
    }

    fn atom(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => self.unexpected("an atom"),
        }
    }

    fn document(&mut self) -> Result<KbDocument, ParseError> {
        let mut doc = KbDocument::default();
        let mut section: Option<String> = None;
        while let Some(t) = self.peek().cloned() {
            if let Tok::Section(s) = t {
                self.at += 1;
                section = Some(s);
                continue;
            }
            let start = self.pos();
            match section.as_deref() {
                Some("ontology") => {
                    let f = self.iff()?;
                    self.expect(&Tok::Dot)?;
                    doc.ontology.push(f);
                    doc.ontology_pos.push(start);
                }
                Some(_) => {
                    doc.rules.push(self.rule()?);
                    doc.rule_pos.push(start);
                }
                None => return self.unexpected("`%ontology` or `%rules`"),
            }
        }
        Ok(doc)
    }

    fn rule(&mut self) -> Result<NamedRule, ParseError> {
        let head = self.atom()?;
        let mut body = Vec::new();
        if self.eat(&Tok::Neck) {
            loop {
                let first = self.atom()?;
                let lit = if first == "not" && matches!(self.peek(), Some(Tok::Ident(_))) {
                    Literal {
                        atom: self.atom()?,
                        negated: true,
                    }
                } else {
                    Literal {
                        atom: first,
                        negated: false,
                    }
                };
                body.push(lit);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        if !self.eat(&Tok::Dot) {
            return self.unexpected("`,` or `.`");
        }
        Ok(NamedRule { head, body })
    }

    fn iff(&mut self) -> Result<Formula<String>, ParseError> {
        let mut lhs = self.implies()?;
        while self.eat(&Tok::DoubleArrow) {
            lhs = Formula::iff(lhs, self.implies()?);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula<String>, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Arrow) {
            return Ok(Formula::implies(lhs, self.implies()?));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula<String>, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Bar) {
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula<String>, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::Amp) {
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula<String>, ParseError> {
        if self.eat(&Tok::Tilde) {
            return Ok(Formula::not(self.unary()?));
        }
        if self.eat(&Tok::LParen) {
            let f = self.iff()?;
            self.expect(&Tok::RParen)?;
            return Ok(f);
        }
        if self.eat(&Tok::Bottom) {
            return Ok(Formula::Falsum);
        }
        match self.peek() {
            Some(Tok::Ident(_)) => self.atom().map(Formula::Atom),
            _ => self.unexpected("a formula"),
        }
    }
}

pub fn parse_document(text: &str) -> Result<KbDocument, ParseError> {
    let toks = lex(text)?;
    let end = Pos {
        line: text.lines().count().max(1),
        column: text.lines().last().map_or(1, |l| l.chars().count() + 1),
    };
    Parser { toks, at: 0, end }.document()
}

pub fn parse_kb(text: &str) -> Result<KnowledgeBase, ParseError> {
    parse_document(text).map(KbDocument::into_kb)
}

fn precedence<A>(f: &Formula<A>) -> u8 {
    match f {
        Formula::Iff(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(..) => 3,
        Formula::And(..) => 4,
        Formula::Not(_) => 5,
        Formula::Atom(_) | Formula::Falsum => 6,
    }
}

/// Renders a formula with the fewest parentheses the grammar needs.
pub fn print_formula<A>(f: &Formula<A>, name: &impl Fn(&A) -> String) -> String {
    fn go<A>(f: &Formula<A>, min: u8, name: &impl Fn(&A) -> String, out: &mut String) {
        let prec = precedence(f);
        if prec < min {
            out.push('(');
        }
        match f {
            Formula::Atom(a) => out.push_str(&name(a)),
            Formula::Falsum => out.push('⊥'),
            Formula::Not(x) => {
                out.push('~');
                go(x, 5, name, out);
            }
            Formula::And(x, y) | Formula::Or(x, y) | Formula::Iff(x, y) => {
                let op = match f {
                    Formula::And(..) => " & ",
                    Formula::Or(..) => " | ",
                    _ => " <-> ",
                };
                go(x, prec, name, out);
                out.push_str(op);
                go(y, prec + 1, name, out);
            }
            Formula::Implies(x, y) => {
                go(x, prec + 1, name, out);
                out.push_str(" -> ");
                go(y, prec, name, out);
            }
        }
        if prec < min {
            out.push(')');
        }
    }
    let mut out = String::new();
    go(f, 0, name, &mut out);
    out
}

/// Prints a knowledge base so that parsing the result yields an equal one.
///
/// Body literals are printed in id order, which preserves atom interning.
pub fn print_kb(kb: &KnowledgeBase) -> String {
    let mut out = String::new();
    let name = |a: &crate::kb::Atom| kb.name(*a).to_owned();
    if !kb.ontology().is_empty() {
        out.push_str("%ontology\n");
        for f in kb.ontology() {
            let _ = writeln!(out, "{}.", print_formula(f, &name));
        }
    }
    if !kb.rules().is_empty() {
        out.push_str("%rules\n");
        for r in kb.rules() {
            out.push_str(kb.name(r.head));
            let mut lits: Vec<(usize, bool)> = r
                .pos
                .iter()
                .map(|a| (a, false))
                .chain(r.neg.iter().map(|a| (a, true)))
                .collect();
            lits.sort_unstable();
            for (i, (a, negated)) in lits.iter().enumerate() {
                out.push_str(if i == 0 { " :- " } else { ", " });
                if *negated {
                    out.push_str("not ");
                }
                out.push_str(kb.name(crate::kb::Atom(*a as u32)));
            }
            out.push_str(".\n");
        }
    }
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Something the command line reports.
#[derive(Clone, Debug)]
pub enum Report {
    /// The least stable fixpoint with its outer iterations; inner chains are
    /// printed only when `inner` is set.
    Lfp {
        trace: StableTrace<AtomSet>,
        verdict: ModelVerdict,
        inner: bool,
    },
    Enumerate {
        fixpoints: Vec<(Approximation, ModelVerdict)>,
    },
    Check {
        approximation: Approximation,
        verdict: ModelVerdict,
    },
}

fn names(kb: &KnowledgeBase, s: &AtomSet) -> Value {
    json!(kb.names(s))
}

fn tetra_json(kb: &KnowledgeBase, x: &Tetra<AtomSet>) -> Value {
    json!({"t": names(kb, &x.t), "f": names(kb, &x.f), "u": names(kb, &x.u), "p": names(kb, &x.p)})
}

fn pair_json(kb: &KnowledgeBase, x: &Bi<AtomSet>, a: &str, b: &str) -> Value {
    json!({a: names(kb, &x.first), b: names(kb, &x.second)})
}

fn verdict_json(v: &ModelVerdict) -> Value {
    json!({"subset": v.subset, "fixpoint": v.fixpoint, "consistent": v.consistent})
}

fn inner_json(kb: &KnowledgeBase, log: &InnerLog<AtomSet>) -> Value {
    json!({
        "lower": log.lower.iter().map(|x| pair_json(kb, x, "t", "f")).collect::<Vec<_>>(),
        "upper": log.upper.iter().map(|x| pair_json(kb, x, "u", "p")).collect::<Vec<_>>(),
    })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn verdict_text(v: &ModelVerdict) -> String {
    format!(
        "subset={} fixpoint={} consistent={} model={}",
        yes(v.subset),
        yes(v.fixpoint),
        yes(v.consistent),
        yes(v.is_model())
    )
}

fn tetra_text(kb: &KnowledgeBase, x: &Tetra<AtomSet>) -> String {
    format!(
        "T={} F={} U={} P={}",
        kb.show(&x.t),
        kb.show(&x.f),
        kb.show(&x.u),
        kb.show(&x.p)
    )
}

/// Renders a report. Atom names are sorted, so output depends only on the
/// report's contents.
pub fn print_report(kb: &KnowledgeBase, report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let v = report_json(kb, report);
            let mut s = serde_json::to_string_pretty(&v).expect("JSON values serialize");
            s.push('\n');
            s
        }
        Format::Text => report_text(kb, report),
    }
}

fn report_json(kb: &KnowledgeBase, report: &Report) -> Value {
    match report {
        Report::Lfp {
            trace,
            verdict,
            inner,
        } => {
            let fix = trace.fixpoint();
            let mut v = json!({
                "iterations": trace.states.iter().map(|x| tetra_json(kb, x)).collect::<Vec<_>>(),
                "fixpoint": {"t": names(kb, &fix.t), "p": names(kb, &fix.p)},
                "verdicts": verdict_json(verdict),
            });
            if *inner {
                v["inner"] = json!(trace
                    .inner
                    .iter()
                    .map(|l| inner_json(kb, l))
                    .collect::<Vec<_>>());
            }
            v
        }
        Report::Enumerate { fixpoints } => json!({
            "fixpoints": fixpoints.iter().map(|(ap, v)| json!({
                "t": names(kb, &ap.first),
                "p": names(kb, &ap.second),
                "verdicts": verdict_json(v),
                "model": v.is_model(),
            })).collect::<Vec<_>>(),
        }),
        Report::Check {
            approximation,
            verdict,
        } => json!({
            "t": names(kb, &approximation.first),
            "p": names(kb, &approximation.second),
            "verdicts": verdict_json(verdict),
            "model": verdict.is_model(),
        }),
    }
}

fn report_text(kb: &KnowledgeBase, report: &Report) -> String {
    let mut out = String::new();
    match report {
        Report::Lfp {
            trace,
            verdict,
            inner,
        } => {
            for (i, x) in trace.states.iter().enumerate() {
                let _ = writeln!(out, "iteration {i}: {}", tetra_text(kb, x));
                if *inner {
                    let log = &trace.inner[i];
                    for (k, x) in log.lower.iter().enumerate() {
                        let _ = writeln!(
                            out,
                            "  lower {k}: T={} F={}",
                            kb.show(&x.first),
                            kb.show(&x.second)
                        );
                    }
                    for (k, x) in log.upper.iter().enumerate() {
                        let _ = writeln!(
                            out,
                            "  upper {k}: U={} P={}",
                            kb.show(&x.first),
                            kb.show(&x.second)
                        );
                    }
                }
            }
            let fix = trace.fixpoint();
            let _ = writeln!(out, "verdicts: {}", verdict_text(verdict));
            let _ = writeln!(out, "fixpoint: T={} P={}", kb.show(&fix.t), kb.show(&fix.p));
        }
        Report::Enumerate { fixpoints } => {
            let models = fixpoints.iter().filter(|(_, v)| v.is_model()).count();
            let _ = writeln!(
                out,
                "{} stable fixpoints, {} models",
                fixpoints.len(),
                models
            );
            for (ap, v) in fixpoints {
                let _ = writeln!(
                    out,
                    "T={} P={} {}",
                    kb.show(&ap.first),
                    kb.show(&ap.second),
                    verdict_text(v)
                );
            }
        }
        Report::Check {
            approximation,
            verdict,
        } => {
            let _ = writeln!(
                out,
                "T={} P={} {}",
                kb.show(&approximation.first),
                kb.show(&approximation.second),
                verdict_text(verdict)
            );
            let _ = writeln!(out, "model: {}", yes(verdict.is_model()));
        }
    }
    out
}
