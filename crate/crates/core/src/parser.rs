//! Reader and printer for `.ndp` proof scripts.
//!
//! A script is a sequence of top-level forms:
//!
//! ```text
//! # comment
//! (logic inf)
//! (const a b)
//! (pred F 1)
//! (fun f 2)
//! (proof name
//!   (rule AndI
//!     (assume A)
//!     (assume B)
//!     => A & B))
//! ```
//!
//! Predicate and function arities are inferred from use unless declared.
//! Bare identifiers in term position are variables unless declared with
//! `const`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::calculus::Mode;
use crate::proof::{Aux, Deduction, Label, NodePath, Rule, RuleApp};
use crate::syntax::{Formula, Ident, Signature, SignatureError, Term};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    And,
    Or,
    Imp,
    Not,
    Eq,
    FatArrow,
    Bottom,
    ExistsBang,
    All,
    Ex,
    The,
    Keyword(String),
    Ident(String),
    Num(u64),
    Eof,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, col, message: String| ParseError { line, col, message };
    while i < chars.len() {
        let c = chars[i];
        let (sl, sc) = (line, col);
        let mut push = |tok, len: usize, i: &mut usize, col: &mut usize| {
            out.push(Spanned { tok, line: sl, col: sc });
            *i += len;
            *col += len;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            '[' => push(Tok::LBracket, 1, &mut i, &mut col),
            ']' => push(Tok::RBracket, 1, &mut i, &mut col),
            ',' => push(Tok::Comma, 1, &mut i, &mut col),
            '.' => push(Tok::Dot, 1, &mut i, &mut col),
            '&' | '∧' => push(Tok::And, 1, &mut i, &mut col),
            '|' | '∨' => push(Tok::Or, 1, &mut i, &mut col),
            '~' | '¬' => push(Tok::Not, 1, &mut i, &mut col),
            '→' => push(Tok::Imp, 1, &mut i, &mut col),
            '⊥' => push(Tok::Bottom, 1, &mut i, &mut col),
            '∀' => push(Tok::All, 1, &mut i, &mut col),
            'ι' => push(Tok::The, 1, &mut i, &mut col),
            '∃' => {
                if chars.get(i + 1) == Some(&'!') {
                    push(Tok::ExistsBang, 2, &mut i, &mut col)
                } else {
                    push(Tok::Ex, 1, &mut i, &mut col)
                }
            }
            '-' if chars.get(i + 1) == Some(&'>') => push(Tok::Imp, 2, &mut i, &mut col),
            '=' if chars.get(i + 1) == Some(&'>') => push(Tok::FatArrow, 2, &mut i, &mut col),
            '=' => push(Tok::Eq, 1, &mut i, &mut col),
            '_' if chars.get(i + 1) == Some(&'|') && chars.get(i + 2) == Some(&'_') => {
                push(Tok::Bottom, 3, &mut i, &mut col)
            }
            ':' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_alphanumeric() {
                    j += 1;
                }
                let word: String = chars[start..j].iter().collect();
                if word.is_empty() {
                    return Err(err(sl, sc, "expected option name after `:`".into()));
                }
                push(Tok::Keyword(word), j - i, &mut i, &mut col)
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let text: String = chars[i..j].iter().collect();
                let n = text.parse().map_err(|_| err(sl, sc, format!("number `{text}` out of range")))?;
                push(Tok::Num(n), j - i, &mut i, &mut col)
            }
            c if c.is_alphabetic() => {
                let mut j = i;
                while j < chars.len()
                    && (chars[j].is_alphanumeric()
                        || chars[j] == '_'
                        || chars[j] == '\''
                        || (chars[j] == '-' && chars.get(j + 1).is_some_and(|c| c.is_alphabetic())))
                {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                if word == "E" && chars.get(j) == Some(&'!') {
                    push(Tok::ExistsBang, 2, &mut i, &mut col);
                    continue;
                }
                let tok = match word.as_str() {
                    "all" => Tok::All,
                    "ex" => Tok::Ex,
                    "the" => Tok::The,
                    _ => Tok::Ident(word),
                };
                push(tok, j - i, &mut i, &mut col)
            }
            other => return Err(err(sl, sc, format!("unexpected character `{other}`"))),
        }
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

const HEADS: [&str; 2] = ["rule", "assume"];

/// Infers undeclared predicate and function arities when set.
#[derive(Clone, Copy, Debug)]
pub struct ParseOptions {
    pub auto_declare: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { auto_declare: true }
    }
}

struct Parser<'s> {
    toks: Vec<Spanned>,
    pos: usize,
    sig: &'s mut Signature,
    opts: ParseOptions,
}

impl<'s> Parser<'s> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn line(&self) -> usize {
        self.toks[self.pos].line
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let s = &self.toks[self.pos];
        Err(ParseError { line: s.line, col: s.col, message: message.into() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}, found {}", describe(self.peek())))
        }
    }

    fn ident(&mut self, what: &str) -> Result<Ident, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !HEADS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            other => self.error(format!("expected {what}, found {}", describe(&other))),
        }
    }

    fn sig_result(&self, r: Result<(), SignatureError>) -> Result<(), ParseError> {
        match r {
            Ok(()) => Ok(()),
            Err(e) => self.error(e.to_string()),
        }
    }

    fn use_predicate(&mut self, name: &str, arity: usize) -> Result<(), ParseError> {
        if !self.opts.auto_declare && !self.sig.predicates.contains_key(name) {
            return self.error(format!("undeclared predicate `{name}`"));
        }
        let r = self.sig.declare_predicate(name, arity);
        self.sig_result(r)
    }

    fn use_function(&mut self, name: &str, arity: usize) -> Result<(), ParseError> {
        if !self.opts.auto_declare && !self.sig.functions.contains_key(name) {
            return self.error(format!("undeclared function `{name}`"));
        }
        let r = self.sig.declare_function(name, arity);
        self.sig_result(r)
    }

    // formula := quant | imp ; imp := or ('->' formula)?
    fn formula(&mut self) -> Result<Formula, ParseError> {
        if matches!(self.peek(), Tok::All | Tok::Ex) {
            return self.quantifier();
        }
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn quantifier(&mut self) -> Result<Formula, ParseError> {
        let universal = self.bump() == Tok::All;
        let x = self.ident("bound variable")?;
        self.expect(Tok::Dot, "`.` after bound variable")?;
        let body = self.formula()?;
        Ok(if universal { Formula::all(x, body) } else { Formula::ex(x, body) })
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.conjunction()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                let a = self.unary()?;
                Ok(Formula::imp(a, Formula::Bottom))
            }
            Tok::All | Tok::Ex => self.quantifier(),
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Bottom => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Tok::ExistsBang => {
                self.bump();
                Ok(Formula::exists(self.term()?))
            }
            Tok::The => {
                self.bump();
                let x = self.ident("bound variable")?;
                self.expect(Tok::LBracket, "`[`")?;
                let f = self.formula()?;
                self.expect(Tok::Comma, "`,`")?;
                let g = self.formula()?;
                self.expect(Tok::RBracket, "`]`")?;
                Ok(Formula::iota(x, f, g))
            }
            Tok::LParen if !self.starts_node() => {
                self.bump();
                let a = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(a)
            }
            Tok::Ident(name) if !HEADS.contains(&name.as_str()) => {
                self.bump();
                let args = if *self.peek() == Tok::LParen && !self.starts_node() {
                    Some(self.term_args()?)
                } else {
                    None
                };
                if *self.peek() == Tok::Eq {
                    let lhs = self.finish_term(name, args)?;
                    self.bump();
                    let rhs = self.term()?;
                    return Ok(Formula::eq(lhs, rhs));
                }
                let args = args.unwrap_or_default();
                self.use_predicate(&name, args.len())?;
                Ok(Formula::pred(name, args))
            }
            other => self.error(format!("expected formula, found {}", describe(&other))),
        }
    }

    /// `(rule` or `(assume` ahead: the formula ends here.
    fn starts_node(&self) -> bool {
        *self.peek() == Tok::LParen
            && matches!(self.peek_at(1), Tok::Ident(s) if HEADS.contains(&s.as_str()))
    }

    fn term_args(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.term()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let name = self.ident("term")?;
        let args = if *self.peek() == Tok::LParen && !self.starts_node() {
            Some(self.term_args()?)
        } else {
            None
        };
        self.finish_term(name, args)
    }

    fn finish_term(&mut self, name: Ident, args: Option<Vec<Term>>) -> Result<Term, ParseError> {
        match args {
            Some(args) => {
                self.use_function(&name, args.len())?;
                Ok(Term::App(name, args))
            }
            None if self.sig.is_constant(&name) => Ok(Term::Const(name)),
            None => {
                if self.sig.predicates.contains_key(&name) || self.sig.functions.contains_key(&name) {
                    return self.error(format!("`{name}` is not a term"));
                }
                Ok(Term::Var(name))
            }
        }
    }

    fn deduction(&mut self, path: &mut NodePath, lines: &mut BTreeMap<NodePath, usize>) -> Result<Deduction, ParseError> {
        lines.insert(path.clone(), self.line());
        self.expect(Tok::LParen, "`(`")?;
        match self.bump() {
            Tok::Ident(h) if h == "assume" => {
                let formula = self.formula()?;
                let mut label = None;
                if *self.peek() == Tok::Keyword("label".into()) {
                    self.bump();
                    label = Some(self.label()?);
                }
                self.expect(Tok::RParen, "`)` closing assume")?;
                Ok(Deduction::Assumption { formula, label })
            }
            Tok::Ident(h) if h == "rule" => {
                let name = match self.peek().clone() {
                    Tok::Ident(n) => n,
                    other => return self.error(format!("expected rule name, found {}", describe(&other))),
                };
                let Some(rule) = Rule::from_name(&name) else {
                    return self.error(format!("unknown rule `{name}`"));
                };
                self.bump();
                let mut app = RuleApp::new(rule);
                while let Tok::Keyword(k) = self.peek().clone() {
                    self.bump();
                    match k.as_str() {
                        "eigen" => app.eigen = Some(self.ident("eigenvariable")?),
                        "witness" => app.witness = Some(self.term()?),
                        "label" => app.label = Some(self.label()?),
                        "aux" => app.aux = Some(self.aux()?),
                        other => return self.error(format!("unknown option `:{other}`")),
                    }
                }
                let mut premises = Vec::new();
                while *self.peek() == Tok::LParen {
                    path.push(premises.len());
                    premises.push(self.deduction(path, lines)?);
                    path.pop();
                }
                self.expect(Tok::FatArrow, "`=>` before the conclusion")?;
                let conclusion = self.formula()?;
                self.expect(Tok::RParen, "`)` closing rule")?;
                Ok(Deduction::Inference { rule: app, premises, conclusion })
            }
            other => {
                self.pos -= 1;
                self.error(format!("expected `rule` or `assume`, found {}", describe(&other)))
            }
        }
    }

    fn label(&mut self) -> Result<Label, ParseError> {
        match self.peek().clone() {
            Tok::Num(n) if n >= 1 && n <= Label::MAX as u64 => {
                self.bump();
                Ok(n as Label)
            }
            other => self.error(format!("expected label (a number >= 1), found {}", describe(&other))),
        }
    }

    fn aux(&mut self) -> Result<Aux, ParseError> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Aux::Index(n as usize))
            }
            Tok::Ident(_) => {
                let var = self.ident("template variable")?;
                self.expect(Tok::Dot, "`.` after template variable")?;
                let formula = self.formula()?;
                Ok(Aux::Template { var, formula })
            }
            other => self.error(format!("expected `:aux` data, found {}", describe(&other))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Eof => "end of input".into(),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Keyword(s) => format!("`:{s}`"),
        Tok::Num(n) => format!("`{n}`"),
        other => format!("{other:?}"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedProof {
    pub name: String,
    pub deduction: Deduction,
    /// Line of the opening parenthesis of every node.
    pub lines: BTreeMap<NodePath, usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProofScript {
    pub mode: Option<Mode>,
    pub signature: Signature,
    /// Symbols that were written out as declarations.
    pub declared: Signature,
    pub proofs: Vec<NamedProof>,
}

impl ProofScript {
    pub fn get(&self, name: &str) -> Option<&Deduction> {
        self.proofs.iter().find(|p| p.name == name).map(|p| &p.deduction)
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    parse_formula_in(text, &mut Signature::default())
}

pub fn parse_formula_in(text: &str, sig: &mut Signature) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, sig, opts: ParseOptions::default() };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {} after formula", describe(p.peek())));
    }
    Ok(f)
}

pub fn parse_term_in(text: &str, sig: &mut Signature) -> Result<Term, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, sig, opts: ParseOptions::default() };
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {} after term", describe(p.peek())));
    }
    Ok(t)
}

/// Parses a single deduction (no surrounding `proof` form).
pub fn parse_deduction_in(text: &str, sig: &mut Signature) -> Result<Deduction, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, sig, opts: ParseOptions::default() };
    let d = p.deduction(&mut Vec::new(), &mut BTreeMap::new())?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {} after deduction", describe(p.peek())));
    }
    Ok(d)
}

pub fn parse_proof(text: &str) -> Result<ProofScript, ParseError> {
    parse_proof_with(text, ParseOptions::default())
}

pub fn parse_proof_with(text: &str, opts: ParseOptions) -> Result<ProofScript, ParseError> {
    let mut script = ProofScript::default();
    let mut sig = Signature::default();
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, sig: &mut sig, opts };
    let mut seen: HashMap<String, ()> = HashMap::new();
    while *p.peek() != Tok::Eof {
        if p.starts_node() {
            // a bare deduction is an anonymous proof
            let mut lines = BTreeMap::new();
            let d = p.deduction(&mut Vec::new(), &mut lines)?;
            let name = format!("proof{}", script.proofs.len() + 1);
            seen.insert(name.clone(), ());
            script.proofs.push(NamedProof { name, deduction: d, lines });
            continue;
        }
        p.expect(Tok::LParen, "`(`")?;
        let head = p.ident("declaration")?;
        match head.as_str() {
            "logic" => {
                let name = match p.bump() {
                    Tok::Ident(s) => s,
                    other => return p.error(format!("expected logic name, found {}", describe(&other))),
                };
                let Some(mode) = Mode::from_name(&name) else {
                    return p.error(format!("unknown logic `{name}`"));
                };
                script.mode = Some(mode);
            }
            "const" => {
                while let Tok::Ident(c) = p.peek().clone() {
                    p.bump();
                    let r = p.sig.declare_constant(&c);
                    p.sig_result(r)?;
                    script.declared.declare_constant(&c).ok();
                }
            }
            "pred" | "fun" => {
                let name = p.ident("symbol name")?;
                let arity = match p.bump() {
                    Tok::Num(n) => n as usize,
                    other => return p.error(format!("expected arity, found {}", describe(&other))),
                };
                let r = if head == "pred" {
                    script.declared.declare_predicate(&name, arity).ok();
                    p.sig.declare_predicate(&name, arity)
                } else {
                    script.declared.declare_function(&name, arity).ok();
                    p.sig.declare_function(&name, arity)
                };
                p.sig_result(r)?;
            }
            "proof" => {
                let name = p.ident("proof name")?;
                if seen.insert(name.clone(), ()).is_some() {
                    return p.error(format!("duplicate proof name `{name}`"));
                }
                let mut lines = BTreeMap::new();
                let d = p.deduction(&mut Vec::new(), &mut lines)?;
                script.proofs.push(NamedProof { name, deduction: d, lines });
            }
            other => return p.error(format!("unknown declaration `{other}`")),
        }
        p.expect(Tok::RParen, "`)`")?;
    }
    script.signature = sig;
    Ok(script)
}

pub fn serialize_formula(a: &Formula) -> String {
    a.to_string()
}

fn write_rule_app(out: &mut String, app: &RuleApp) {
    write!(out, "(rule {}", app.rule.name()).unwrap();
    if let Some(e) = &app.eigen {
        write!(out, " :eigen {e}").unwrap();
    }
    if let Some(w) = &app.witness {
        write!(out, " :witness {w}").unwrap();
    }
    if let Some(l) = app.label {
        write!(out, " :label {l}").unwrap();
    }
    match &app.aux {
        Some(Aux::Index(i)) => write!(out, " :aux {i}").unwrap(),
        Some(Aux::Template { var, formula }) => write!(out, " :aux {var}. {formula}").unwrap(),
        None => {}
    }
}

fn write_deduction(out: &mut String, d: &Deduction, indent: usize) {
    let pad = " ".repeat(indent);
    match d {
        Deduction::Assumption { formula, label } => {
            write!(out, "{pad}(assume {formula}").unwrap();
            if let Some(l) = label {
                write!(out, " :label {l}").unwrap();
            }
            out.push(')');
        }
        Deduction::Inference { rule, premises, conclusion } => {
            out.push_str(&pad);
            write_rule_app(out, rule);
            for p in premises {
                out.push('\n');
                write_deduction(out, p, indent + 2);
            }
            write!(out, "\n{pad}  => {conclusion})").unwrap();
        }
    }
}

/// Canonical text of a deduction: one node per line, two-space indentation.
pub fn serialize(d: &Deduction) -> String {
    let mut out = String::new();
    write_deduction(&mut out, d, 0);
    out
}

pub fn serialize_script(s: &ProofScript) -> String {
    let mut out = String::new();
    if let Some(m) = s.mode {
        writeln!(out, "(logic {})", m.name()).unwrap();
    }
    let used_consts = &s.signature.constants;
    if !used_consts.is_empty() {
        let names: Vec<&str> = used_consts.iter().map(String::as_str).collect();
        writeln!(out, "(const {})", names.join(" ")).unwrap();
    }
    for (name, arity) in &s.declared.predicates {
        writeln!(out, "(pred {name} {arity})").unwrap();
    }
    for (name, arity) in &s.declared.functions {
        writeln!(out, "(fun {name} {arity})").unwrap();
    }
    for p in &s.proofs {
        writeln!(out, "(proof {}", p.name).unwrap();
        let mut body = String::new();
        write_deduction(&mut body, &p.deduction, 2);
        out.push_str(&body);
        out.push_str(")\n");
    }
    out
}

/// A script holding one proof, for emitting constructed deductions.
pub fn script_of(mode: Mode, name: &str, d: Deduction) -> ProofScript {
    let mut signature = Signature::default();
    for f in d.formulas() {
        collect_constants(f, &mut signature);
    }
    ProofScript {
        mode: Some(mode),
        signature,
        declared: Signature::default(),
        proofs: vec![NamedProof { name: name.to_string(), deduction: d, lines: BTreeMap::new() }],
    }
}

fn collect_constants(f: &Formula, sig: &mut Signature) {
    fn term(t: &Term, sig: &mut Signature) {
        match t {
            Term::Const(c) => {
                sig.constants.insert(c.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| term(a, sig)),
            Term::Var(_) => {}
        }
    }
    match f {
        Formula::Pred(_, args) => args.iter().for_each(|a| term(a, sig)),
        Formula::Eq(a, b) => {
            term(a, sig);
            term(b, sig);
        }
        Formula::Exists(t) => term(t, sig),
        Formula::Bottom => {}
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            collect_constants(a, sig);
            collect_constants(b, sig);
        }
        Formula::All(_, a) | Formula::Ex(_, a) => collect_constants(a, sig),
        Formula::Iota(_, a, b) => {
            collect_constants(a, sig);
            collect_constants(b, sig);
        }
    }
}
