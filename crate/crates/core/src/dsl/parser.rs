use std::collections::HashMap;
use std::str::FromStr;

use super::lexer::{lex, Tok, Token};
use super::{Diagnostic, Model, ModelProgram, Parsed};
use crate::advice::{PrefixAdvice, Schedule, SymbolSource};
use crate::gallery::BuiltSystem;
use crate::machine::{
    Action, Configuration, Element, PartitionRef, Program, Rule, Space, SystemDef, TapeConfig,
};
use crate::timed::TimedSystem;

mod values;

pub(super) type PResult<T> = Result<T, Diagnostic>;

const BLOCKS: [&str; 4] = ["advice", "system", "timed-system", "program"];

pub(super) struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
    advice: HashMap<String, PrefixAdvice>,
}

fn show(t: Option<&Tok>) -> String {
    match t {
        None => "end of input".into(),
        Some(Tok::Ident(s)) => format!("`{s}`"),
        Some(Tok::Int(s)) => format!("`{s}`"),
        Some(Tok::Str(s)) => format!("string {s:?}"),
        Some(Tok::Punct(c)) => format!("`{c}`"),
        Some(Tok::Arrow) => "`->`".into(),
    }
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn pos_of(&self, i: usize) -> (usize, usize) {
        self.toks.get(i).map_or(self.end, |t| (t.line, t.col))
    }

    pub(super) fn diag_at(&self, i: usize, msg: impl Into<String>) -> Diagnostic {
        let (l, c) = self.pos_of(i);
        Diagnostic::new(l, c, msg)
    }

    pub(super) fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(self.diag_at(self.pos, msg))
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        self.err(format!("expected {wanted}, found {}", show(self.peek())))
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    pub(super) fn at_punct(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Punct(c))
    }

    pub(super) fn eat_punct(&mut self, c: char) -> bool {
        let hit = self.at_punct(c);
        if hit {
            self.pos += 1;
        }
        hit
    }

    pub(super) fn expect_punct(&mut self, c: char) -> PResult<()> {
        if self.eat_punct(c) {
            Ok(())
        } else {
            self.unexpected(&format!("`{c}`"))
        }
    }

    pub(super) fn expect_arrow(&mut self) -> PResult<()> {
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            Ok(())
        } else {
            self.unexpected("`->`")
        }
    }

    pub(super) fn at_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == w)
    }

    pub(super) fn eat_word(&mut self, w: &str) -> bool {
        let hit = self.at_word(w);
        if hit {
            self.pos += 1;
        }
        hit
    }

    pub(super) fn expect_word(&mut self, w: &str) -> PResult<()> {
        if self.eat_word(w) {
            Ok(())
        } else {
            self.unexpected(&format!("`{w}`"))
        }
    }

    pub(super) fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == "opaque" => self.err("opaque values cannot be parsed"),
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.unexpected("an identifier"),
        }
    }

    /// An identifier or a quoted name.
    pub(super) fn name(&mut self) -> PResult<String> {
        match self.peek() {
            Some(Tok::Str(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.ident(),
        }
    }

    pub(super) fn string(&mut self) -> PResult<String> {
        match self.bump() {
            Some(Tok::Str(s)) => Ok(s),
            _ => {
                self.pos -= 1;
                self.unexpected("a string")
            }
        }
    }

    pub(super) fn char_lit(&mut self) -> PResult<char> {
        let at = self.pos;
        let s = self.string()?;
        let mut it = s.chars();
        match (it.next(), it.next()) {
            (Some(c), None) => Ok(c),
            _ => Err(self.diag_at(at, "expected a single character")),
        }
    }

    pub(super) fn uint<T: FromStr>(&mut self) -> PResult<T> {
        match self.peek() {
            Some(Tok::Int(s)) => match s.parse() {
                Ok(v) => {
                    self.pos += 1;
                    Ok(v)
                }
                Err(_) => self.err(format!("integer {s} is out of range")),
            },
            _ => self.unexpected("an integer"),
        }
    }

    /// Comma-separated items up to `close`, the opening bracket already consumed.
    pub(super) fn list<T>(
        &mut self,
        close: char,
        mut item: impl FnMut(&mut Self) -> PResult<T>,
    ) -> PResult<Vec<T>> {
        let mut out = Vec::new();
        if self.eat_punct(close) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat_punct(close) {
                return Ok(out);
            }
            self.expect_punct(',')?;
        }
    }

    /// Skips from the start of a failed block to the start of the next one.
    fn recover(&mut self, start: usize) {
        self.pos = start + 1;
        let mut depth = 0usize;
        let mut opened = false;
        while let Some(t) = self.peek() {
            match t {
                Tok::Punct('{') => {
                    depth += 1;
                    opened = true;
                }
                Tok::Punct('}') if depth > 0 => {
                    depth -= 1;
                    if depth == 0 && opened {
                        self.pos += 1;
                        return;
                    }
                }
                Tok::Ident(w) if depth == 0 && BLOCKS.contains(&w.as_str()) => return,
                _ => {}
            }
            self.pos += 1;
        }
    }

    fn eat_semi(&mut self) {
        self.eat_punct(';');
    }

    fn advice_block(&mut self) -> PResult<(String, PrefixAdvice)> {
        self.expect_word("advice")?;
        let name = self.name()?;
        self.expect_punct('=')?;
        let source = self.source()?;
        let schedule = if self.eat_word("schedule") {
            if self.eat_word("identity") {
                Schedule::Identity
            } else if self.eat_word("log") {
                self.expect_punct('(')?;
                let c = self.rational()?;
                self.expect_punct(')')?;
                Schedule::Log(c)
            } else {
                return self.unexpected("`identity` or `log`");
            }
        } else {
            Schedule::Identity
        };
        self.eat_semi();
        Ok((name, PrefixAdvice::new(source, schedule)))
    }

    pub(super) fn source(&mut self) -> PResult<SymbolSource> {
        let at = self.pos;
        let word = self.ident()?;
        match word.as_str() {
            "prng" => {
                self.expect_punct('(')?;
                let seed = self.uint()?;
                self.expect_punct(')')?;
                Ok(SymbolSource::Prng { seed })
            }
            "word" => {
                self.expect_punct('(')?;
                let prefix = self.string()?;
                let cycle = if self.eat_punct(',') { self.string()? } else { String::new() };
                self.expect_punct(')')?;
                Ok(SymbolSource::word(&prefix, &cycle))
            }
            "file" => {
                self.expect_punct('(')?;
                let path_at = self.pos;
                let path = self.string()?;
                self.expect_punct(')')?;
                SymbolSource::from_file(&path).map_err(|e| self.diag_at(path_at, e.to_string()))
            }
            other => match self.advice.get(other) {
                Some(g) => Ok(g.source.clone()),
                None => Err(self.diag_at(at, format!("unknown advice {other}"))),
            },
        }
    }

    fn system_block(&mut self, timed: bool) -> PResult<BuiltSystem> {
        let start = self.pos;
        self.pos += 1;
        let name = self.name()?;
        self.expect_punct('{')?;
        let mut space = None;
        let mut partitions = Vec::new();
        let mut transformations = Vec::new();
        let mut initial = None;
        let mut kappa = Vec::new();
        while !self.eat_punct('}') {
            let stmt = self.ident()?;
            match stmt.as_str() {
                "space" => {
                    space = Some(if self.eat_word("tapes") {
                        self.expect_punct('(')?;
                        let a = self.string()?;
                        self.expect_punct(')')?;
                        Space::Tapes { alphabet: a.chars().collect() }
                    } else {
                        Space::Euclidean(self.set()?)
                    });
                }
                "partition" => {
                    let n = self.name()?;
                    self.expect_punct('=')?;
                    partitions.push((n, self.measurement()?));
                }
                "transform" => {
                    let n = self.name()?;
                    self.expect_punct('=')?;
                    transformations.push((n, self.transformation()?));
                }
                "initial" => initial = Some(self.configuration()?),
                "kappa" if timed => {
                    let n = self.name()?;
                    self.expect_punct('=')?;
                    kappa.push((n, self.kappa()?));
                }
                other => {
                    self.pos -= 1;
                    return Err(self.diag_at(self.pos, format!("unknown system statement `{other}`")));
                }
            }
            self.eat_semi();
        }
        let missing = |what: &str| self.diag_at(start, format!("system {name} has no {what}"));
        let base = SystemDef {
            name: name.clone(),
            space: space.ok_or_else(|| missing("space"))?,
            partitions,
            transformations,
            initial: initial.ok_or_else(|| missing("initial configuration"))?,
        };
        Ok(if timed {
            BuiltSystem::Timed(TimedSystem { base, kappa })
        } else {
            BuiltSystem::Plain(base)
        })
    }

    fn configuration(&mut self) -> PResult<Configuration> {
        if self.eat_word("point") {
            self.expect_punct('(')?;
            let p = self.list(')', Self::real)?;
            if p.is_empty() {
                return self.err("a point needs at least one coordinate");
            }
            Ok(Configuration::Point(p))
        } else if self.eat_word("tape") {
            self.expect_punct('(')?;
            let left = self.string()?;
            self.expect_punct(',')?;
            let head = self.char_lit()?;
            self.expect_punct(',')?;
            let right = self.string()?;
            self.expect_punct(')')?;
            Ok(Configuration::Tape(TapeConfig::from_cells(&left, head, &right)))
        } else {
            self.unexpected("`point` or `tape`")
        }
    }

    fn program_block(&mut self) -> PResult<ModelProgram> {
        let start = self.pos;
        self.pos += 1;
        let name = self.name()?;
        self.expect_punct('{')?;
        let mut system = None;
        let mut alphabet = None;
        let mut states = Vec::new();
        let (mut initial, mut accept, mut reject) = (None, None, None);
        let mut rules = Vec::new();
        while !self.eat_punct('}') {
            let stmt = self.ident()?;
            match stmt.as_str() {
                "system" => system = Some(self.name()?),
                "alphabet" => alphabet = Some(self.string()?.chars().collect()),
                "states" => {
                    states.push(self.name()?);
                    while self.eat_punct(',') {
                        states.push(self.name()?);
                    }
                }
                "initial" => initial = Some(self.name()?),
                "accept" => accept = Some(self.name()?),
                "reject" => reject = Some(self.name()?),
                "rule" => rules.push(self.rule()?),
                other => {
                    self.pos -= 1;
                    return Err(self.diag_at(self.pos, format!("unknown program statement `{other}`")));
                }
            }
            self.eat_semi();
        }
        let missing = |what: &str| self.diag_at(start, format!("program {name} has no {what}"));
        let program = Program {
            name: name.clone(),
            states,
            initial: initial.ok_or_else(|| missing("initial state"))?,
            accept: accept.ok_or_else(|| missing("accept state"))?,
            reject: reject.ok_or_else(|| missing("reject state"))?,
            alphabet: alphabet.ok_or_else(|| missing("alphabet"))?,
            rules,
        };
        Ok(ModelProgram { program, system })
    }

    fn rule(&mut self) -> PResult<Rule> {
        self.expect_punct('(')?;
        let from = self.name()?;
        self.expect_punct(',')?;
        let partition = if self.eat_word("tape") {
            PartitionRef::Tape
        } else {
            PartitionRef::System(self.name()?)
        };
        self.expect_punct(',')?;
        let element = if self.eat_word("EMPTY") {
            Element::Empty
        } else {
            Element::Label(self.string()?)
        };
        self.expect_punct(',')?;
        let to = self.name()?;
        self.expect_punct(',')?;
        let action = if self.at_word("tape") && self.peek_at(1) == Some(&Tok::Punct('(')) {
            self.pos += 2;
            let op = self.tape_op()?;
            self.expect_punct(')')?;
            Action::Tape(op)
        } else if self.at_word("measure") && self.peek_at(1) == Some(&Tok::Punct('(')) {
            self.pos += 2;
            let p = self.name()?;
            self.expect_punct(')')?;
            Action::Measure(p)
        } else {
            Action::Transform(self.name()?)
        };
        self.expect_punct(')')?;
        Ok(Rule { from, partition, element, to, action })
    }
}

/// Parses a whole document, collecting every diagnostic; failed blocks are skipped.
pub fn parse(text: &str) -> Parsed {
    let (toks, mut diagnostics) = lex(text);
    let end = toks.last().map_or((1, 1), |t| (t.line, t.col + 1));
    let mut p = Parser { toks, pos: 0, end, advice: HashMap::new() };
    let mut model = Model::default();
    while p.peek().is_some() {
        let start = p.pos;
        let kw = match p.peek() {
            Some(Tok::Ident(w)) if BLOCKS.contains(&w.as_str()) => w.clone(),
            t => {
                diagnostics.push(p.diag_at(start, format!("expected a block, found {}", show(t))));
                p.recover(start);
                continue;
            }
        };
        let res = match kw.as_str() {
            "advice" => p.advice_block().map(|(n, g)| {
                p.advice.insert(n.clone(), g.clone());
                model.advice.push((n, g));
            }),
            "system" => p.system_block(false).map(|s| model.systems.push(s)),
            "timed-system" => p.system_block(true).map(|s| model.systems.push(s)),
            _ => p.program_block().map(|m| model.programs.push(m)),
        };
        if let Err(d) = res {
            diagnostics.push(d);
            p.recover(start);
        }
    }
    Parsed { model, diagnostics }
}
