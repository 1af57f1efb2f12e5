//! The model-file language: one declaration per line, `#` starts a comment.
//!
//! ```text
//! ring R = Z/4
//! ring D = dual(R, Z/2)
//! category C = free_modules(R, max_rank=2)
//! bimodule M = hom_tensor(C, Z/2)
//! bimodule N = smash(M, pointed_set(3))
//! category S = semidirect(C, M)
//! run compare_k0 S
//! ```

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("undeclared name `{0}`")]
    Undeclared(String),
    #[error("`{0}` is declared twice")]
    Duplicate(String),
    #[error("`{name}` is a {found}, expected a {expected}")]
    WrongKind {
        name: String,
        found: &'static str,
        expected: &'static str,
    },
}

impl ParseErrorKind {
    pub fn tag(&self) -> &'static str {
        match self {
            ParseErrorKind::Syntax(_) => "syntax",
            ParseErrorKind::Undeclared(_) => "undeclared",
            ParseErrorKind::Duplicate(_) => "duplicate",
            ParseErrorKind::WrongKind { .. } => "wrong_kind",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingExpr {
    Zn { n: u64 },
    Dual { base: String, m: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CategoryExpr {
    FreeModules { ring: String, max_rank: usize },
    Semidirect { base: String, bimodule: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BimoduleExpr {
    HomTensor { category: String, m: u64 },
    Zero { category: String },
    Smash { bimodule: String, points: usize },
}

/// Options given on a `run` line or on the command line.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RunOptions {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "decl", rename_all = "snake_case")]
pub enum Decl {
    Ring { name: String, expr: RingExpr },
    Category { name: String, expr: CategoryExpr },
    Bimodule { name: String, expr: BimoduleExpr },
    Run { command: Command, target: String, options: RunOptions },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    CheckAxioms,
    CheckBiexact,
    CheckExactStructure,
    Classify,
    Normalize,
    Straighten,
    K0,
    CompareK0,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::CheckAxioms,
        Command::CheckBiexact,
        Command::CheckExactStructure,
        Command::Classify,
        Command::Normalize,
        Command::Straighten,
        Command::K0,
        Command::CompareK0,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::CheckAxioms => "check_axioms",
            Command::CheckBiexact => "check_biexact",
            Command::CheckExactStructure => "check_exact_structure",
            Command::Classify => "classify",
            Command::Normalize => "normalize",
            Command::Straighten => "straighten",
            Command::K0 => "k0",
            Command::CompareK0 => "compare_k0",
        }
    }

    pub fn from_name(s: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Kind of declaration the target must be.
    pub fn target_kind(self) -> Kind {
        match self {
            Command::CheckBiexact => Kind::Bimodule,
            _ => Kind::Category,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Ring,
    Category,
    Bimodule,
}

impl Kind {
    fn word(self) -> &'static str {
        match self {
            Kind::Ring => "ring",
            Kind::Category => "category",
            Kind::Bimodule => "bimodule",
        }
    }
}

/// A declaration and the line it came from. Positions do not take part in
/// equality.
#[derive(Clone, Debug)]
pub struct Spanned {
    pub line: usize,
    pub decl: Decl,
}

impl PartialEq for Spanned {
    fn eq(&self, other: &Self) -> bool {
        self.decl == other.decl
    }
}

impl Eq for Spanned {}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModelSpec {
    pub decls: Vec<Spanned>,
}

impl ModelSpec {
    pub fn runs(&self) -> impl Iterator<Item = (Command, &str, &RunOptions)> {
        self.decls.iter().filter_map(|s| match &s.decl {
            Decl::Run { command, target, options } => Some((*command, target.as_str(), options)),
            _ => None,
        })
    }

    pub fn count(&self, kind: Kind) -> usize {
        self.decls
            .iter()
            .filter(|s| {
                matches!(
                    (&s.decl, kind),
                    (Decl::Ring { .. }, Kind::Ring) | (Decl::Category { .. }, Kind::Category) | (Decl::Bimodule { .. }, Kind::Bimodule)
                )
            })
            .count()
    }

    /// Kind of every declared name.
    pub fn kinds(&self) -> HashMap<&str, Kind> {
        self.decls
            .iter()
            .filter_map(|s| match &s.decl {
                Decl::Ring { name, .. } => Some((name.as_str(), Kind::Ring)),
                Decl::Category { name, .. } => Some((name.as_str(), Kind::Category)),
                Decl::Bimodule { name, .. } => Some((name.as_str(), Kind::Bimodule)),
                Decl::Run { .. } => None,
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    Sym(char),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
        }
    }
}

struct Line<'a> {
    number: usize,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    /// Column just past the last character, for end-of-line errors.
    end: usize,
    names: &'a HashMap<String, Kind>,
}

impl Line<'_> {
    fn err(&self, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.number,
            column,
            kind,
        }
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(c, _)| *c)
    }

    fn syntax(&self, want: &str) -> ParseError {
        let found = match self.toks.get(self.pos) {
            Some((_, t)) => format!("found {t}"),
            None => "found end of line".into(),
        };
        self.err(self.column(), ParseErrorKind::Syntax(format!("expected {want}, {found}")))
    }

    fn ident(&mut self, want: &str) -> Result<(usize, String), ParseError> {
        let col = self.column();
        match self.toks.get(self.pos) {
            Some((_, Tok::Ident(s))) => {
                let s = s.clone();
                self.pos += 1;
                Ok((col, s))
            }
            _ => Err(self.syntax(want)),
        }
    }

    fn keyword(&mut self, word: &str) -> Result<(), ParseError> {
        match self.toks.get(self.pos) {
            Some((_, Tok::Ident(s))) if s == word => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.syntax(&format!("`{word}`"))),
        }
    }

    fn sym(&mut self, c: char) -> Result<(), ParseError> {
        match self.toks.get(self.pos) {
            Some((_, Tok::Sym(d))) if *d == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.syntax(&format!("`{c}`"))),
        }
    }

    fn num(&mut self, want: &str) -> Result<u64, ParseError> {
        match self.toks.get(self.pos) {
            Some((_, Tok::Num(n))) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.syntax(want)),
        }
    }

    /// `Z/<n>`
    fn modulus(&mut self) -> Result<u64, ParseError> {
        self.keyword("Z")?;
        self.sym('/')?;
        self.num("a modulus")
    }

    /// A previously declared name of the given kind.
    fn reference(&mut self, kind: Kind) -> Result<String, ParseError> {
        let (col, name) = self.ident(&format!("a {} name", kind.word()))?;
        match self.names.get(&name) {
            None => Err(self.err(col, ParseErrorKind::Undeclared(name))),
            Some(k) if *k != kind => Err(self.err(
                col,
                ParseErrorKind::WrongKind {
                    name,
                    found: k.word(),
                    expected: kind.word(),
                },
            )),
            Some(_) => Ok(name),
        }
    }

    fn done(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            return Err(self.syntax("end of line"));
        }
        Ok(())
    }
}

fn tokenize(number: usize, text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            toks.push((col, Tok::Ident(chars[start..i].iter().collect())));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse().map_err(|_| ParseError {
                line: number,
                column: col,
                kind: ParseErrorKind::Syntax(format!("number `{s}` is too large")),
            })?;
            toks.push((col, Tok::Num(n)));
        } else if "=(),/-".contains(c) {
            toks.push((col, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(ParseError {
                line: number,
                column: col,
                kind: ParseErrorKind::Syntax(format!("unexpected character `{c}`")),
            });
        }
    }
    Ok(toks)
}

pub fn parse(source: &str) -> Result<ModelSpec, ParseError> {
    let mut names: HashMap<String, Kind> = HashMap::new();
    let mut decls = Vec::new();
    for (idx, raw) in source.lines().enumerate() {
        let number = idx + 1;
        let text = raw.split('#').next().unwrap_or("");
        let toks = tokenize(number, text)?;
        if toks.is_empty() {
            continue;
        }
        let mut line = Line {
            number,
            toks,
            pos: 0,
            end: text.chars().count() + 1,
            names: &names,
        };
        let (col, head) = line.ident("`ring`, `category`, `bimodule` or `run`")?;
        let decl = match head.as_str() {
            "ring" | "category" | "bimodule" => {
                let (ncol, name) = line.ident("a name")?;
                if names.contains_key(&name) {
                    return Err(line.err(ncol, ParseErrorKind::Duplicate(name)));
                }
                line.sym('=')?;
                let decl = match head.as_str() {
                    "ring" => Decl::Ring {
                        name: name.clone(),
                        expr: ring_expr(&mut line)?,
                    },
                    "category" => Decl::Category {
                        name: name.clone(),
                        expr: category_expr(&mut line)?,
                    },
                    _ => Decl::Bimodule {
                        name: name.clone(),
                        expr: bimodule_expr(&mut line)?,
                    },
                };
                line.done()?;
                let kind = match head.as_str() {
                    "ring" => Kind::Ring,
                    "category" => Kind::Category,
                    _ => Kind::Bimodule,
                };
                names.insert(name, kind);
                decl
            }
            "run" => run_line(&mut line)?,
            _ => {
                return Err(line.err(
                    col,
                    ParseErrorKind::Syntax(format!("expected `ring`, `category`, `bimodule` or `run`, found `{head}`")),
                ))
            }
        };
        decls.push(Spanned { line: number, decl });
    }
    Ok(ModelSpec { decls })
}

fn ring_expr(line: &mut Line) -> Result<RingExpr, ParseError> {
    match line.toks.get(line.pos) {
        Some((_, Tok::Ident(s))) if s == "Z" => Ok(RingExpr::Zn { n: line.modulus()? }),
        Some((_, Tok::Ident(s))) if s == "dual" => {
            line.pos += 1;
            line.sym('(')?;
            let base = line.reference(Kind::Ring)?;
            line.sym(',')?;
            let m = line.modulus()?;
            line.sym(')')?;
            Ok(RingExpr::Dual { base, m })
        }
        _ => Err(line.syntax("`Z/<n>` or `dual(...)`")),
    }
}

fn category_expr(line: &mut Line) -> Result<CategoryExpr, ParseError> {
    let (col, f) = line.ident("`free_modules` or `semidirect`")?;
    line.sym('(')?;
    let expr = match f.as_str() {
        "free_modules" => {
            let ring = line.reference(Kind::Ring)?;
            line.sym(',')?;
            line.keyword("max_rank")?;
            line.sym('=')?;
            let max_rank = line.num("a rank")? as usize;
            CategoryExpr::FreeModules { ring, max_rank }
        }
        "semidirect" => {
            let base = line.reference(Kind::Category)?;
            line.sym(',')?;
            let bimodule = line.reference(Kind::Bimodule)?;
            CategoryExpr::Semidirect { base, bimodule }
        }
        _ => {
            return Err(line.err(
                col,
                ParseErrorKind::Syntax(format!("expected `free_modules` or `semidirect`, found `{f}`")),
            ))
        }
    };
    line.sym(')')?;
    Ok(expr)
}

fn bimodule_expr(line: &mut Line) -> Result<BimoduleExpr, ParseError> {
    let (col, f) = line.ident("`hom_tensor`, `zero` or `smash`")?;
    line.sym('(')?;
    let expr = match f.as_str() {
        "hom_tensor" => {
            let category = line.reference(Kind::Category)?;
            line.sym(',')?;
            let m = line.modulus()?;
            BimoduleExpr::HomTensor { category, m }
        }
        "zero" => BimoduleExpr::Zero {
            category: line.reference(Kind::Category)?,
        },
        "smash" => {
            let bimodule = line.reference(Kind::Bimodule)?;
            line.sym(',')?;
            line.keyword("pointed_set")?;
            line.sym('(')?;
            let points = line.num("a number of points")? as usize;
            line.sym(')')?;
            BimoduleExpr::Smash { bimodule, points }
        }
        _ => {
            return Err(line.err(
                col,
                ParseErrorKind::Syntax(format!("expected `hom_tensor`, `zero` or `smash`, found `{f}`")),
            ))
        }
    };
    line.sym(')')?;
    Ok(expr)
}

fn run_line(line: &mut Line) -> Result<Decl, ParseError> {
    let (col, name) = line.ident("a command")?;
    let command = Command::from_name(&name)
        .ok_or_else(|| line.err(col, ParseErrorKind::Syntax(format!("unknown command `{name}`"))))?;
    let target = line.reference(command.target_kind())?;
    let mut options = RunOptions::default();
    while line.pos < line.toks.len() {
        let col = line.column();
        line.sym('-')?;
        line.sym('-')?;
        let (_, flag) = line.ident("an option name")?;
        let value = line.num("a number")?;
        let slot = match flag.as_str() {
            "p" => options.p.replace(value as usize).is_some(),
            "seed" => options.seed.replace(value).is_some(),
            "samples" => options.samples.replace(value as usize).is_some(),
            _ => return Err(line.err(col, ParseErrorKind::Syntax(format!("unknown option `--{flag}`")))),
        };
        if slot {
            return Err(line.err(col, ParseErrorKind::Syntax(format!("option `--{flag}` given twice"))));
        }
    }
    Ok(Decl::Run { command, target, options })
}

impl fmt::Display for RingExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingExpr::Zn { n } => write!(f, "Z/{n}"),
            RingExpr::Dual { base, m } => write!(f, "dual({base}, Z/{m})"),
        }
    }
}

impl fmt::Display for CategoryExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CategoryExpr::FreeModules { ring, max_rank } => write!(f, "free_modules({ring}, max_rank={max_rank})"),
            CategoryExpr::Semidirect { base, bimodule } => write!(f, "semidirect({base}, {bimodule})"),
        }
    }
}

impl fmt::Display for BimoduleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BimoduleExpr::HomTensor { category, m } => write!(f, "hom_tensor({category}, Z/{m})"),
            BimoduleExpr::Zero { category } => write!(f, "zero({category})"),
            BimoduleExpr::Smash { bimodule, points } => write!(f, "smash({bimodule}, pointed_set({points}))"),
        }
    }
}

impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decl::Ring { name, expr } => write!(f, "ring {name} = {expr}"),
            Decl::Category { name, expr } => write!(f, "category {name} = {expr}"),
            Decl::Bimodule { name, expr } => write!(f, "bimodule {name} = {expr}"),
            Decl::Run { command, target, options } => {
                write!(f, "run {} {target}", command.name())?;
                if let Some(p) = options.p {
                    write!(f, " --p {p}")?;
                }
                if let Some(s) = options.seed {
                    write!(f, " --seed {s}")?;
                }
                if let Some(n) = options.samples {
                    write!(f, " --samples {n}")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.decls {
            writeln!(f, "{}", s.decl)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z4: &str = "\
# Z/4 with coefficients in Z/2
ring R = Z/4
category C = free_modules(R, max_rank=2)
bimodule M = hom_tensor(C, Z/2)
category S = semidirect(C, M)
run compare_k0 S
";

    #[test]
    fn empty_file() {
        assert_eq!(parse("").unwrap(), ModelSpec::default());
        assert_eq!(parse("# nothing\n\n   \n").unwrap(), ModelSpec::default());
    }

    #[test]
    fn z4_model_tree() {
        let spec = parse(Z4).unwrap();
        assert_eq!(spec.count(Kind::Ring), 1);
        assert_eq!(spec.count(Kind::Category), 2);
        assert_eq!(spec.count(Kind::Bimodule), 1);
        assert_eq!(spec.runs().count(), 1);
        assert_eq!(spec.decls[0].line, 2);
        assert_eq!(
            spec.decls[2].decl,
            Decl::Bimodule {
                name: "M".into(),
                expr: BimoduleExpr::HomTensor { category: "C".into(), m: 2 }
            }
        );
    }

    #[test]
    fn undeclared_name_points_at_it() {
        let err = parse("ring R = Z/4\nbimodule m = hom_tensor(undeclared, Z/2)\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 25));
        assert_eq!(err.kind, ParseErrorKind::Undeclared("undeclared".into()));
    }

    #[test]
    fn duplicates_and_kinds() {
        let err = parse("ring R = Z/4\nring R = Z/2").unwrap_err();
        assert_eq!((err.line, err.column, err.kind.tag()), (2, 6, "duplicate"));
        let err = parse("ring R = Z/4\ncategory C = semidirect(R, R)").unwrap_err();
        assert_eq!(err.kind.tag(), "wrong_kind");
        let err = parse("ring R = Z/4\nrun k0 R").unwrap_err();
        assert_eq!((err.line, err.column, err.kind.tag()), (2, 8, "wrong_kind"));
    }

    #[test]
    fn syntax_errors_carry_columns() {
        let err = parse("ring R = Z/").unwrap_err();
        assert_eq!((err.line, err.column), (1, 12));
        let err = parse("ring R = Z/4 extra").unwrap_err();
        assert_eq!(err.column, 14);
        let err = parse("ring R = Z/4\nrun frobnicate R").unwrap_err();
        assert_eq!((err.line, err.column), (2, 5));
        let err = parse("ring R = Z/4 $").unwrap_err();
        assert_eq!(err.column, 14);
        let err = parse("widget W = Z/2").unwrap_err();
        assert_eq!(err.column, 1);
    }

    #[test]
    fn run_options() {
        let spec = parse(&format!("{Z4}run straighten S --p 3 --seed 7 --samples 20\n")).unwrap();
        let (cmd, target, opts) = spec.runs().nth(1).unwrap();
        assert_eq!((cmd, target), (Command::Straighten, "S"));
        assert_eq!(
            opts,
            &RunOptions {
                p: Some(3),
                seed: Some(7),
                samples: Some(20)
            }
        );
        assert!(parse(&format!("{Z4}run straighten S --p 3 --p 2\n")).is_err());
        assert!(parse(&format!("{Z4}run straighten S --q 3\n")).is_err());
    }

    #[test]
    fn print_then_parse_is_identity() {
        let src = format!(
            "{Z4}ring D = dual(R, Z/2)\ncategory E = free_modules(D, max_rank=1)\nbimodule Z0 = zero(E)\nbimodule W = smash(M, pointed_set(3))\nrun straighten S --p 2 --seed 4\n"
        );
        let spec = parse(&src).unwrap();
        let printed = spec.to_string();
        let again = parse(&printed).unwrap();
        assert_eq!(spec, again);
        assert_eq!(printed, again.to_string());
    }
}
