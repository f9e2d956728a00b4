//! ASCII concrete syntax for formulas, a minimal-parenthesis printer, and
//! the formula file format.
//!
//! ```text
//! formula  := or ( "->" formula )?
//! or       := and ( "|" and )*
//! and      := unary ( "&" unary )*
//! unary    := ( "~" | "G" | "F" | "X" | "H" | "O" | "Y" ) unary | primary
//! primary  := "(" formula ")"
//!           | "<" var "." formula ">" "(" term ")"
//!           | pred "(" var ( "," var )* ")"
//!           | var "=" var
//!           | "@" macro "(" name ( "," name )* ")"
//! ```
//!
//! `G F X H O Y` are always, eventually, next, historically, once and
//! yesterday. Macros expand to the property builders in [`crate::props`].

use std::fmt;

use thiserror::Error;

use crate::props;
use crate::syntax::{is_identifier, Alphabet, Formula, Term, RESERVED};

/// Half-open range of 0-based character offsets into the parsed text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }

    fn join(self, other: SourceSpan) -> SourceSpan {
        SourceSpan::new(self.start.min(other.start), self.end.max(other.end))
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical,
    Syntax,
    ArityMismatch,
    ConstantInAtom,
    UnbalancedAbstraction,
    UnknownSymbol,
    Namespace,
    Macro,
    Header,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at {span}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
    pub message: String,
}

impl ParseError {
    fn new(kind: ParseErrorKind, span: SourceSpan, message: impl Into<String>) -> Self {
        ParseError {
            kind,
            span,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Tilde,
    Amp,
    Bar,
    Arrow,
    Lt,
    Gt,
    Dot,
    LParen,
    RParen,
    Comma,
    Equals,
    At,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Tilde => "`~`",
            Tok::Amp => "`&`",
            Tok::Bar => "`|`",
            Tok::Arrow => "`->`",
            Tok::Lt => "`<`",
            Tok::Gt => "`>`",
            Tok::Dot => "`.`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::Comma => "`,`",
            Tok::Equals => "`=`",
            Tok::At => "`@`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '~' => Tok::Tilde,
            '&' => Tok::Amp,
            '|' => Tok::Bar,
            '<' => Tok::Lt,
            '>' => Tok::Gt,
            '.' => Tok::Dot,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '=' => Tok::Equals,
            '@' => Tok::At,
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Arrow
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i + 1;
                while j < chars.len()
                    && (chars[j].is_ascii_alphanumeric() || chars[j] == '_' || chars[j] == '\'')
                {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                i = j - 1;
                Tok::Ident(word)
            }
            other => {
                return Err(ParseError::new(
                    ParseErrorKind::Lexical,
                    SourceSpan::new(i, i + 1),
                    format!("unexpected character {other:?}"),
                ))
            }
        };
        i += 1;
        toks.push((tok, SourceSpan::new(start, i)));
    }
    toks.push((Tok::Eof, SourceSpan::new(chars.len(), chars.len())));
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    alphabet: &'a mut Alphabet,
    infer: bool,
    bound: Vec<String>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, kind: ParseErrorKind, what: &str) -> Result<SourceSpan, ParseError> {
        if *self.peek() == want {
            Ok(self.bump().1)
        } else {
            Err(ParseError::new(
                kind,
                self.span(),
                format!("expected {want} {what}, found {}", self.peek()),
            ))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, SourceSpan), ParseError> {
        match self.bump() {
            (Tok::Ident(s), sp) => Ok((s, sp)),
            (t, sp) => Err(ParseError::new(
                ParseErrorKind::Syntax,
                sp,
                format!("expected {what}, found {t}"),
            )),
        }
    }

    fn formula(&mut self) -> Result<(Formula, SourceSpan), ParseError> {
        let (lhs, sp) = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let (rhs, sp2) = self.formula()?;
            return Ok((Formula::implies(lhs, rhs), sp.join(sp2)));
        }
        Ok((lhs, sp))
    }

    fn or(&mut self) -> Result<(Formula, SourceSpan), ParseError> {
        let (mut acc, mut sp) = self.and()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let (rhs, sp2) = self.and()?;
            acc = Formula::or(acc, rhs);
            sp = sp.join(sp2);
        }
        Ok((acc, sp))
    }

    fn and(&mut self) -> Result<(Formula, SourceSpan), ParseError> {
        let (mut acc, mut sp) = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let (rhs, sp2) = self.unary()?;
            acc = Formula::and(acc, rhs);
            sp = sp.join(sp2);
        }
        Ok((acc, sp))
    }

    fn unary(&mut self) -> Result<(Formula, SourceSpan), ParseError> {
        let start = self.span();
        let ctor: Option<fn(Formula) -> Formula> = match self.peek() {
            Tok::Tilde => Some(Formula::not),
            Tok::Ident(s) => match s.as_str() {
                "G" => Some(Formula::always),
                "F" => Some(Formula::eventually),
                "X" => Some(Formula::next),
                "H" => Some(Formula::historically),
                "O" => Some(Formula::once),
                "Y" => Some(Formula::yesterday),
                _ => None,
            },
            _ => None,
        };
        match ctor {
            Some(ctor) => {
                self.bump();
                let (inner, sp) = self.unary()?;
                Ok((ctor(inner), start.join(sp)))
            }
            None => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<(Formula, SourceSpan), ParseError> {
        let start = self.span();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let (f, _) = self.formula()?;
                let end = self.expect(Tok::RParen, ParseErrorKind::Syntax, "to close `(`")?;
                Ok((f, start.join(end)))
            }
            Tok::Lt => self.abstraction(),
            Tok::At => self.macro_call(),
            Tok::Ident(name) => {
                self.bump();
                match self.peek() {
                    Tok::LParen => self.atom(name, start),
                    Tok::Equals => {
                        self.bump();
                        let (rhs, rsp) = self.ident("variable after `=`")?;
                        self.variable(&name, start, &format!("{name} = {rhs}"))?;
                        self.variable(&rhs, rsp, &format!("{name} = {rhs}"))?;
                        Ok((Formula::Eq(name, rhs), start.join(rsp)))
                    }
                    t => Err(ParseError::new(
                        ParseErrorKind::Syntax,
                        self.span(),
                        format!("expected `(` or `=` after `{name}`, found {t}"),
                    )),
                }
            }
            t => Err(ParseError::new(
                ParseErrorKind::Syntax,
                start,
                format!("expected a formula, found {t}"),
            )),
        }
    }

    fn atom(&mut self, pred: String, start: SourceSpan) -> Result<(Formula, SourceSpan), ParseError> {
        self.bump();
        let mut args: Vec<(String, SourceSpan)> = Vec::new();
        if *self.peek() != Tok::RParen {
            loop {
                args.push(self.ident("variable argument")?);
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        let end = self.expect(Tok::RParen, ParseErrorKind::Syntax, "to close argument list")?;
        let span = start.join(end);
        let text = format!(
            "{pred}({})",
            args.iter().map(|(a, _)| a.as_str()).collect::<Vec<_>>().join(", ")
        );
        if RESERVED.contains(&pred.as_str()) {
            return Err(ParseError::new(
                ParseErrorKind::Namespace,
                start,
                format!("reserved operator name used as predicate: {text}"),
            ));
        }
        match self.alphabet.preds.get(&pred) {
            Some(&n) if n != args.len() => {
                return Err(ParseError::new(
                    ParseErrorKind::ArityMismatch,
                    span,
                    format!("arity mismatch: {text} (declared {pred}/{n})"),
                ))
            }
            Some(_) => {}
            None if self.infer => {
                self.alphabet.preds.insert(pred.clone(), args.len());
            }
            None => {
                return Err(ParseError::new(
                    ParseErrorKind::UnknownSymbol,
                    start,
                    format!("undeclared predicate: {pred}"),
                ))
            }
        }
        for (a, sp) in &args {
            if self.alphabet.consts.contains(a) && !self.bound.contains(a) {
                return Err(ParseError::new(
                    ParseErrorKind::ConstantInAtom,
                    *sp,
                    format!("constant under relation symbol: {text}"),
                ));
            }
            self.variable(a, *sp, &text)?;
        }
        let args = args.into_iter().map(|(a, _)| a).collect();
        Ok((Formula::Atom { pred, args }, span))
    }

    /// Resolves an identifier in variable position.
    fn variable(&mut self, name: &str, span: SourceSpan, ctx: &str) -> Result<(), ParseError> {
        if self.bound.iter().any(|b| b == name) || self.alphabet.vars.contains(name) {
            return Ok(());
        }
        if self.alphabet.consts.contains(name) {
            return Err(ParseError::new(
                ParseErrorKind::ConstantInAtom,
                span,
                format!("constant under relation symbol: {ctx}"),
            ));
        }
        if RESERVED.contains(&name) {
            return Err(ParseError::new(
                ParseErrorKind::Namespace,
                span,
                format!("reserved operator name used as variable: {name}"),
            ));
        }
        if self.infer {
            self.alphabet.vars.insert(name.to_string());
            return Ok(());
        }
        Err(ParseError::new(
            ParseErrorKind::UnknownSymbol,
            span,
            format!("undeclared variable: {name}"),
        ))
    }

    fn abstraction(&mut self) -> Result<(Formula, SourceSpan), ParseError> {
        let (_, start) = self.bump();
        let (var, vsp) = self.ident("abstraction variable")?;
        if self.alphabet.consts.contains(&var) {
            return Err(ParseError::new(
                ParseErrorKind::Namespace,
                vsp,
                format!("abstraction binds a constant symbol: {var}"),
            ));
        }
        if RESERVED.contains(&var.as_str()) {
            return Err(ParseError::new(
                ParseErrorKind::Namespace,
                vsp,
                format!("reserved operator name used as variable: {var}"),
            ));
        }
        self.expect(Tok::Dot, ParseErrorKind::Syntax, "after abstraction variable")?;
        self.bound.push(var.clone());
        let body = self.formula();
        self.bound.pop();
        let (body, _) = body?;
        self.expect(Tok::Gt, ParseErrorKind::UnbalancedAbstraction, "to close abstraction")?;
        self.expect(
            Tok::LParen,
            ParseErrorKind::UnbalancedAbstraction,
            "to open abstraction argument",
        )?;
        let (arg, asp) = self.ident("abstraction argument")?;
        let end = self.expect(
            Tok::RParen,
            ParseErrorKind::UnbalancedAbstraction,
            "to close abstraction argument",
        )?;
        let term = self.term(arg, asp)?;
        Ok((Formula::abstraction(var, body, term), start.join(end)))
    }

    fn term(&mut self, name: String, span: SourceSpan) -> Result<Term, ParseError> {
        if self.bound.contains(&name) || self.alphabet.vars.contains(&name) {
            return Ok(Term::Var(name));
        }
        if self.alphabet.consts.contains(&name) {
            return Ok(Term::Const(name));
        }
        if RESERVED.contains(&name.as_str()) {
            return Err(ParseError::new(
                ParseErrorKind::Namespace,
                span,
                format!("reserved operator name used as term: {name}"),
            ));
        }
        if self.infer {
            self.alphabet.consts.insert(name.clone());
            return Ok(Term::Const(name));
        }
        Err(ParseError::new(
            ParseErrorKind::UnknownSymbol,
            span,
            format!("undeclared term: {name}"),
        ))
    }

    fn constant(&mut self, name: &str, span: SourceSpan) -> Result<(), ParseError> {
        match self.term(name.to_string(), span)? {
            Term::Const(_) => Ok(()),
            Term::Var(_) => Err(ParseError::new(
                ParseErrorKind::Macro,
                span,
                format!("macro argument must be a constant: {name}"),
            )),
        }
    }

    fn macro_call(&mut self) -> Result<(Formula, SourceSpan), ParseError> {
        let (_, start) = self.bump();
        let (name, nsp) = self.ident("macro name")?;
        self.expect(Tok::LParen, ParseErrorKind::Syntax, "after macro name")?;
        let mut args = Vec::new();
        loop {
            args.push(self.ident("macro argument")?);
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        let end = self.expect(Tok::RParen, ParseErrorKind::Syntax, "to close macro arguments")?;
        let span = start.join(end);
        let arity_err = |n: usize| {
            ParseError::new(
                ParseErrorKind::Macro,
                span,
                format!("@{name} takes {n} arguments, got {}", args.len()),
            )
        };
        let expected = match name.as_str() {
            "AlwaysNew" | "NoChange" | "AlwaysReturn" => 1,
            "Same" | "SameInPast" | "NextNew2" => 2,
            "NextNew1" | "RigidOnVisited" | "Forwarding" => 3,
            _ => {
                return Err(ParseError::new(
                    ParseErrorKind::Macro,
                    nsp,
                    format!("unknown macro @{name}"),
                ))
            }
        };
        if args.len() != expected {
            return Err(arity_err(expected));
        }
        let const_args = if name == "RigidOnVisited" { &args[1..] } else { &args[..] };
        for (a, sp) in const_args {
            self.constant(a, *sp)?;
        }
        let a: Vec<&str> = args.iter().map(|(s, _)| s.as_str()).collect();
        let f = match name.as_str() {
            "Same" => props::same(a[0], a[1]),
            "AlwaysNew" => props::always_new(a[0]),
            "SameInPast" => props::same_in_past(a[0], a[1]),
            "NoChange" => props::no_change(a[0]),
            "AlwaysReturn" => props::always_return(a[0]),
            "NextNew1" => props::next_new1(a[0], a[1], a[2]),
            "NextNew2" => props::next_new2(a[0], a[1]),
            "RigidOnVisited" => {
                let (pred, psp) = &args[0];
                match self.alphabet.preds.get(pred) {
                    Some(2) => {}
                    Some(n) => {
                        return Err(ParseError::new(
                            ParseErrorKind::ArityMismatch,
                            *psp,
                            format!("arity mismatch: {pred} is {pred}/{n}, expected binary"),
                        ))
                    }
                    None if self.infer => {
                        self.alphabet.preds.insert(pred.clone(), 2);
                    }
                    None => {
                        return Err(ParseError::new(
                            ParseErrorKind::UnknownSymbol,
                            *psp,
                            format!("undeclared predicate: {pred}"),
                        ))
                    }
                }
                props::rigid_on_visited(a[0], a[1], a[2])
            }
            "Forwarding" => props::forwarding_protocol(a[0], a[1], a[2])
                .map_err(|e| ParseError::new(ParseErrorKind::Macro, span, e.to_string()))?,
            _ => unreachable!(),
        };
        Ok((f, span))
    }
}

fn parse_with(text: &str, alphabet: &mut Alphabet, infer: bool) -> Result<Formula, ParseError> {
    if let Err(d) = alphabet.check() {
        return Err(ParseError::new(
            ParseErrorKind::Header,
            SourceSpan::new(0, 0),
            d[0].to_string(),
        ));
    }
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        alphabet,
        infer,
        bound: Vec::new(),
    };
    let (f, _) = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(ParseError::new(
            ParseErrorKind::Syntax,
            p.span(),
            format!("unexpected {} after formula", p.peek()),
        ));
    }
    Ok(f)
}

/// Parses `text` against a declared alphabet. Every identifier must resolve
/// to a declared or bound variable, a declared constant, or a declared
/// predicate.
pub fn parse_formula(text: &str, alphabet: &Alphabet) -> Result<Formula, ParseError> {
    let mut a = alphabet.clone();
    parse_with(text, &mut a, false)
}

/// Parses `text`, inferring the alphabet: abstraction arguments that are not
/// variables become constants, and predicates take the arity of their first
/// use.
pub fn parse_formula_inferred(text: &str) -> Result<(Formula, Alphabet), ParseError> {
    let mut a = Alphabet::new();
    let f = parse_with(text, &mut a, true)?;
    Ok((f, a))
}

// Binding strength: larger binds tighter.
fn level(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        _ => 4,
    }
}

fn write_operand(out: &mut String, f: &Formula, parens: bool) {
    if parens {
        out.push('(');
        write_formula(out, f);
        out.push(')');
    } else {
        write_formula(out, f);
    }
}

fn write_unary(out: &mut String, op: &str, f: &Formula) {
    out.push_str(op);
    // `=` is infix, so it is parenthesised under a prefix operator.
    let parens = level(f) < 4 || matches!(f, Formula::Eq(..));
    if op != "~" {
        out.push(' ');
    }
    write_operand(out, f, parens);
}

fn write_formula(out: &mut String, f: &Formula) {
    match f {
        Formula::Atom { pred, args } => {
            out.push_str(pred);
            out.push('(');
            out.push_str(&args.join(", "));
            out.push(')');
        }
        Formula::Eq(l, r) => {
            out.push_str(l);
            out.push_str(" = ");
            out.push_str(r);
        }
        Formula::Not(g) => write_unary(out, "~", g),
        Formula::Next(g) => write_unary(out, "X", g),
        Formula::Eventually(g) => write_unary(out, "F", g),
        Formula::Always(g) => write_unary(out, "G", g),
        Formula::Yesterday(g) => write_unary(out, "Y", g),
        Formula::Once(g) => write_unary(out, "O", g),
        Formula::Historically(g) => write_unary(out, "H", g),
        Formula::And(l, r) | Formula::Or(l, r) => {
            let (me, op) = if matches!(f, Formula::And(..)) { (3, " & ") } else { (2, " | ") };
            write_operand(out, l, level(l) < me);
            out.push_str(op);
            write_operand(out, r, level(r) <= me);
        }
        Formula::Implies(l, r) => {
            write_operand(out, l, level(l) <= 1);
            out.push_str(" -> ");
            write_formula(out, r);
        }
        Formula::Abstract { var, body, arg } => {
            out.push('<');
            out.push_str(var);
            out.push_str(". ");
            write_formula(out, body);
            out.push_str(">(");
            out.push_str(arg.name());
            out.push(')');
        }
    }
}

/// Deterministic printing with the fewest parentheses the grammar needs.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f);
    out
}

/// A formula file: optional `vars:`, `consts:` and `preds:` header lines,
/// then the formula. `#` starts a comment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaFile {
    pub alphabet: Alphabet,
    pub formula: Formula,
    /// Whether the alphabet came from header lines (otherwise inferred).
    pub declared: bool,
}

fn header_names(line: &str, offset: usize) -> Result<Vec<String>, ParseError> {
    let mut out = Vec::new();
    for item in line.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        out.push(item.to_string());
    }
    for n in &out {
        if !n.split('/').next().is_some_and(is_identifier) {
            return Err(ParseError::new(
                ParseErrorKind::Header,
                SourceSpan::new(offset, offset + line.chars().count()),
                format!("bad header entry {n:?}"),
            ));
        }
    }
    Ok(out)
}

pub fn parse_formula_file(text: &str) -> Result<FormulaFile, ParseError> {
    let mut alphabet = Alphabet::new();
    let mut declared = false;
    let mut body = String::with_capacity(text.len());
    let mut offset = 0;
    let mut in_header = true;
    for raw in text.split_inclusive('\n') {
        let len = raw.chars().count();
        let content = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let trimmed = content.trim();
        let header = ["vars:", "consts:", "preds:"]
            .into_iter()
            .find(|h| trimmed.starts_with(h));
        match header {
            Some(h) if in_header => {
                declared = true;
                let names = header_names(&trimmed[h.len()..], offset)?;
                match h {
                    "vars:" => alphabet.vars.extend(names),
                    "consts:" => alphabet.consts.extend(names),
                    _ => {
                        for n in names {
                            let (name, arity) = n.split_once('/').ok_or_else(|| {
                                ParseError::new(
                                    ParseErrorKind::Header,
                                    SourceSpan::new(offset, offset + len),
                                    format!("predicate {n:?} needs name/arity"),
                                )
                            })?;
                            let arity = arity.trim().parse().map_err(|_| {
                                ParseError::new(
                                    ParseErrorKind::Header,
                                    SourceSpan::new(offset, offset + len),
                                    format!("bad arity in {n:?}"),
                                )
                            })?;
                            alphabet.preds.insert(name.trim().to_string(), arity);
                        }
                    }
                }
                body.extend(raw.chars().map(|c| if c == '\n' { '\n' } else { ' ' }));
            }
            _ => {
                if !trimmed.is_empty() {
                    in_header = false;
                }
                // Blank out comments so spans still index the original text.
                body.push_str(content);
                body.extend(raw[content.len()..].chars().map(|c| if c == '\n' { '\n' } else { ' ' }));
            }
        }
        offset += len;
    }
    if declared {
        let formula = parse_with(&body, &mut alphabet, false)?;
        Ok(FormulaFile {
            alphabet,
            formula,
            declared,
        })
    } else {
        let (formula, alphabet) = parse_formula_inferred(&body)?;
        Ok(FormulaFile {
            alphabet,
            formula,
            declared,
        })
    }
}

/// Renders a formula file with a full header.
pub fn write_formula_file(alphabet: &Alphabet, formula: &Formula) -> String {
    let mut out = String::new();
    if !alphabet.vars.is_empty() {
        out.push_str("vars: ");
        out.push_str(&alphabet.vars.iter().cloned().collect::<Vec<_>>().join(", "));
        out.push('\n');
    }
    out.push_str("consts: ");
    out.push_str(&alphabet.consts.iter().cloned().collect::<Vec<_>>().join(", "));
    out.push('\n');
    if !alphabet.preds.is_empty() {
        out.push_str("preds: ");
        let preds: Vec<String> = alphabet.preds.iter().map(|(p, a)| format!("{p}/{a}")).collect();
        out.push_str(&preds.join(", "));
        out.push('\n');
    }
    out.push_str(&print_formula(formula));
    out.push('\n');
    out
}
