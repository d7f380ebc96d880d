//! Line-oriented model files.
//!
//! ```text
//! [space NAME]            one absolute model
//! gen NAME DEGREE
//! d NAME = EXPR           omitted => 0
//! bound N                 optional validity bound
//!
//! [fibration NAME]        relative model, followed by
//! [base] / [fiber]        gen, d and bound lines
//! [total]                 D NAME = EXPR for fiber generators
//! ```
//!
//! Expressions are sums of terms `[RATIONAL ['*']] factor ('*' factor)*`
//! with `factor := NAME ['^' POSINT]`; `#` starts a comment.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{RelativeModel, SullivanModel};
use crate::error::{Error, Result};
use crate::galgebra::{AlgElement, Gens, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Space(SullivanModel),
    Fibration(RelativeModel),
}

/// Every block of a model file, in file order.
#[derive(Debug, Clone, Default)]
pub struct Document {
    pub items: Vec<Item>,
}

impl Document {
    pub fn spaces(&self) -> impl Iterator<Item = &SullivanModel> {
        self.items.iter().filter_map(|i| match i {
            Item::Space(m) => Some(m),
            _ => None,
        })
    }

    pub fn fibrations(&self) -> impl Iterator<Item = &RelativeModel> {
        self.items.iter().filter_map(|i| match i {
            Item::Fibration(f) => Some(f),
            _ => None,
        })
    }
}

/// Parses a file holding exactly one `[space]` block. A file with no
/// header at all is read as a single anonymous space.
pub fn parse_model(text: &str) -> Result<SullivanModel> {
    let doc = parse_document(text)?;
    let mut spaces: Vec<_> = doc.spaces().cloned().collect();
    match (spaces.len(), doc.items.len()) {
        (1, 1) => Ok(spaces.remove(0)),
        _ => Err(Error::Input(format!(
            "expected exactly one [space] block, found {} block(s)",
            doc.items.len()
        ))),
    }
}

/// Parses a file holding exactly one `[fibration]` block.
pub fn parse_fibration(text: &str) -> Result<RelativeModel> {
    let doc = parse_document(text)?;
    let mut fibs: Vec<_> = doc.fibrations().cloned().collect();
    match (fibs.len(), doc.items.len()) {
        (1, 1) => Ok(fibs.remove(0)),
        _ => Err(Error::Input(format!(
            "expected exactly one [fibration] block, found {} block(s)",
            doc.items.len()
        ))),
    }
}

pub fn parse_document(text: &str) -> Result<Document> {
    let mut blocks: Vec<RawBlock> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let lineno = k + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col = content.len() - content.trim_start().len() + 1;
        if let Some(inner) = trimmed.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| syntax(lineno, col, "unterminated section header"))?
                .trim();
            let mut words = inner.split_whitespace();
            let head = words.next().unwrap_or("");
            let name = words.next().map(str::to_string);
            if words.next().is_some() {
                return Err(syntax(lineno, col, "section header takes at most one name"));
            }
            match head {
                "space" | "fibration" => blocks.push(RawBlock {
                    fibration: head == "fibration",
                    name: name.unwrap_or_else(|| "model".into()),
                    line: lineno,
                    sections: vec![RawSection::new(Section::Header)],
                }),
                "base" | "fiber" | "total" => {
                    let block = blocks.last_mut().filter(|b| b.fibration).ok_or_else(|| {
                        syntax(
                            lineno,
                            col,
                            "[base]/[fiber]/[total] outside a [fibration] block",
                        )
                    })?;
                    if name.is_some() {
                        return Err(syntax(lineno, col, "unexpected name after section"));
                    }
                    let sec = match head {
                        "base" => Section::Base,
                        "fiber" => Section::Fiber,
                        _ => Section::Total,
                    };
                    if block.sections.iter().any(|s| s.kind == sec) {
                        return Err(syntax(lineno, col, &format!("duplicate [{head}] section")));
                    }
                    block.sections.push(RawSection::new(sec));
                }
                other => return Err(syntax(lineno, col, &format!("unknown section `{other}`"))),
            }
            continue;
        }
        if blocks.is_empty() {
            blocks.push(RawBlock {
                fibration: false,
                name: "model".into(),
                line: lineno,
                sections: vec![RawSection::new(Section::Header)],
            });
        }
        let block = blocks.last_mut().expect("block exists");
        let section = block.sections.last_mut().expect("section exists");
        section.lines.push(parse_line(content, lineno)?);
    }
    let items = blocks
        .into_iter()
        .map(RawBlock::build)
        .collect::<Result<_>>()?;
    Ok(Document { items })
}

fn syntax(line: usize, column: usize, message: &str) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Header,
    Base,
    Fiber,
    Total,
}

#[derive(Debug)]
struct RawSection {
    kind: Section,
    lines: Vec<Line>,
}

impl RawSection {
    fn new(kind: Section) -> Self {
        RawSection {
            kind,
            lines: Vec::new(),
        }
    }
}

#[derive(Debug)]
struct RawBlock {
    fibration: bool,
    name: String,
    line: usize,
    sections: Vec<RawSection>,
}

#[derive(Debug)]
enum Line {
    Gen {
        name: String,
        degree: u32,
    },
    Diff {
        total: bool,
        name: String,
        expr: Vec<Token>,
        line: usize,
    },
    Bound(u32),
}

fn parse_line(content: &str, lineno: usize) -> Result<Line> {
    let tokens = tokenize(content, lineno)?;
    let word = |k: usize| match tokens.get(k) {
        Some(Token {
            kind: Tok::Ident(s),
            ..
        }) => Some(s.as_str()),
        _ => None,
    };
    let col = |k: usize| tokens.get(k).map_or(content.len() + 1, |t| t.col);
    match word(0) {
        Some("gen") => {
            let name = word(1).ok_or_else(|| syntax(lineno, col(1), "expected generator name"))?;
            let degree = match tokens.get(2) {
                Some(Token {
                    kind: Tok::Int(n), ..
                }) => {
                    u32::try_from(n).map_err(|_| syntax(lineno, col(2), "degree out of range"))?
                }
                _ => return Err(syntax(lineno, col(2), "expected degree")),
            };
            if tokens.len() > 3 {
                return Err(syntax(lineno, col(3), "trailing input after degree"));
            }
            Ok(Line::Gen {
                name: name.to_string(),
                degree,
            })
        }
        Some(kw @ ("d" | "D")) => {
            let name = word(1).ok_or_else(|| syntax(lineno, col(1), "expected generator name"))?;
            if !matches!(tokens.get(2), Some(Token { kind: Tok::Eq, .. })) {
                return Err(syntax(lineno, col(2), "expected `=`"));
            }
            Ok(Line::Diff {
                total: kw == "D",
                name: name.to_string(),
                expr: tokens[3..].to_vec(),
                line: lineno,
            })
        }
        Some("bound") => match (tokens.get(1), tokens.len()) {
            (
                Some(Token {
                    kind: Tok::Int(n), ..
                }),
                2,
            ) => {
                Ok(Line::Bound(u32::try_from(n).map_err(|_| {
                    syntax(lineno, col(1), "bound out of range")
                })?))
            }
            _ => Err(syntax(lineno, col(1), "expected `bound N`")),
        },
        _ => Err(syntax(
            lineno,
            col(0),
            "expected `gen`, `d`, `D` or `bound`",
        )),
    }
}

struct Declared {
    gens: Vec<(String, u32)>,
    diffs: Vec<(String, Vec<Token>, usize)>,
    bound: Option<u32>,
}

fn collect(lines: &[Line], allow_gens: bool, want_total: bool, line: usize) -> Result<Declared> {
    let mut out = Declared {
        gens: Vec::new(),
        diffs: Vec::new(),
        bound: None,
    };
    for l in lines {
        match l {
            Line::Gen { name, degree } => {
                if !allow_gens {
                    return Err(syntax(line, 1, "`gen` not allowed in this section"));
                }
                out.gens.push((name.clone(), *degree));
            }
            Line::Diff {
                total,
                name,
                expr,
                line,
            } => {
                if *total != want_total {
                    let msg = if want_total {
                        "use `D NAME = ...` in [total]"
                    } else {
                        "`D` lines belong in [total]"
                    };
                    return Err(syntax(*line, 1, msg));
                }
                out.diffs.push((name.clone(), expr.clone(), *line));
            }
            Line::Bound(b) => out.bound = Some(*b),
        }
    }
    Ok(out)
}

fn resolve_diffs(
    gens: &Gens,
    target: &Gens,
    diffs: &[(String, Vec<Token>, usize)],
) -> Result<Vec<(usize, AlgElement)>> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for (name, expr, line) in diffs {
        let idx = target.lookup(name)?;
        if !seen.insert(idx) {
            return Err(syntax(
                *line,
                1,
                &format!("differential of `{name}` given twice"),
            ));
        }
        out.push((idx, parse_expr(expr, gens, *line)?));
    }
    Ok(out)
}

impl RawBlock {
    fn build(self) -> Result<Item> {
        if !self.fibration {
            let lines: Vec<&Line> = self.sections.iter().flat_map(|s| &s.lines).collect();
            let lines: Vec<Line> = lines.into_iter().map(clone_line).collect();
            let decl = collect(&lines, true, false, self.line)?;
            let gens = Gens::new(decl.gens)?;
            let diffs = resolve_diffs(&gens, &gens, &decl.diffs)?;
            return Ok(Item::Space(SullivanModel::new(
                self.name, gens, diffs, decl.bound,
            )?));
        }
        let find = |k: Section| self.sections.iter().find(|s| s.kind == k);
        let header = collect(
            &find(Section::Header).expect("header").lines,
            false,
            false,
            self.line,
        )?;
        if !header.diffs.is_empty() {
            return Err(syntax(
                self.line,
                1,
                "differentials must be inside [base], [fiber] or [total]",
            ));
        }
        let base_decl = match find(Section::Base) {
            Some(s) => collect(&s.lines, true, false, self.line)?,
            None => Declared {
                gens: Vec::new(),
                diffs: Vec::new(),
                bound: None,
            },
        };
        let fiber_sec = find(Section::Fiber)
            .ok_or_else(|| syntax(self.line, 1, "fibration without [fiber] section"))?;
        let fiber_decl = collect(&fiber_sec.lines, true, false, self.line)?;
        if fiber_decl.bound.is_some() {
            return Err(syntax(
                self.line,
                1,
                "`bound` belongs to the header or [base]",
            ));
        }
        let total_decl = match find(Section::Total) {
            Some(s) => {
                let d = collect(&s.lines, false, true, self.line)?;
                if d.bound.is_some() {
                    return Err(syntax(
                        self.line,
                        1,
                        "`bound` belongs to the header or [base]",
                    ));
                }
                d
            }
            None => Declared {
                gens: Vec::new(),
                diffs: Vec::new(),
                bound: None,
            },
        };
        let bound = base_decl.bound.or(header.bound);
        let base_gens = Gens::new(base_decl.gens)?;
        let base_diffs = resolve_diffs(&base_gens, &base_gens, &base_decl.diffs)?;
        let base = SullivanModel::new(
            format!("{}/base", self.name),
            base_gens.clone(),
            base_diffs,
            bound,
        )?;
        let fiber_gens = Gens::new(fiber_decl.gens)?;
        let total_gens = base_gens.union(&fiber_gens)?;
        let declared = if fiber_decl.diffs.is_empty() {
            None
        } else {
            Some(resolve_diffs(&fiber_gens, &fiber_gens, &fiber_decl.diffs)?)
        };
        let total = resolve_diffs(&total_gens, &fiber_gens, &total_decl.diffs)?;
        Ok(Item::Fibration(RelativeModel::new(
            self.name, base, fiber_gens, total, declared,
        )?))
    }
}

fn clone_line(l: &Line) -> Line {
    match l {
        Line::Gen { name, degree } => Line::Gen {
            name: name.clone(),
            degree: *degree,
        },
        Line::Diff {
            total,
            name,
            expr,
            line,
        } => Line::Diff {
            total: *total,
            name: name.clone(),
            expr: expr.clone(),
            line: *line,
        },
        Line::Bound(b) => Line::Bound(*b),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Eq,
}

#[derive(Debug, Clone)]
struct Token {
    kind: Tok,
    col: usize,
}

fn tokenize(s: &str, line: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Token {
                kind: Tok::Int(digits.parse().expect("digits")),
                col,
            });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                i += 1;
            }
            out.push(Token {
                kind: Tok::Ident(chars[start..i].iter().collect()),
                col,
            });
            continue;
        }
        let kind = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '=' => Tok::Eq,
            _ => return Err(syntax(line, col, &format!("unexpected character `{c}`"))),
        };
        out.push(Token { kind, col });
        i += 1;
    }
    Ok(out)
}

struct ExprParser<'a> {
    toks: &'a [Token],
    pos: usize,
    gens: &'a Gens,
    line: usize,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.kind)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map_or_else(|| self.toks.last().map_or(1, |t| t.col + 1), |t| t.col)
    }

    fn err(&self, msg: &str) -> Error {
        syntax(self.line, self.col(), msg)
    }

    fn expr(&mut self) -> Result<AlgElement> {
        if self.toks.is_empty() {
            return Err(self.err("empty expression"));
        }
        let mut acc = AlgElement::zero(self.gens);
        let mut first = true;
        while self.pos < self.toks.len() {
            let negative = match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    false
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => return Err(self.err("expected `+` or `-`")),
            };
            first = false;
            let term = self.term()?;
            acc = if negative { &acc - &term } else { &acc + &term };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<AlgElement> {
        let mut coeff = Rational::one();
        let mut have_coeff = false;
        if let Some(Tok::Int(n)) = self.peek() {
            let num = n.clone();
            self.pos += 1;
            let mut c = Rational::from_integer(num);
            if let Some(Tok::Slash) = self.peek() {
                self.pos += 1;
                match self.peek() {
                    Some(Tok::Int(d)) if !d.is_zero() => {
                        c /= Rational::from_integer(d.clone());
                        self.pos += 1;
                    }
                    _ => return Err(self.err("expected positive denominator")),
                }
            }
            coeff = c;
            have_coeff = true;
            if let Some(Tok::Star) = self.peek() {
                self.pos += 1;
                if !matches!(self.peek(), Some(Tok::Ident(_))) {
                    return Err(self.err("expected generator after `*`"));
                }
            }
        }
        let mut factors: Vec<(usize, u32)> = Vec::new();
        if matches!(self.peek(), Some(Tok::Ident(_))) {
            loop {
                factors.push(self.factor()?);
                if let Some(Tok::Star) = self.peek() {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        } else if !have_coeff {
            return Err(self.err("expected a term"));
        }
        AlgElement::from_products(self.gens, &[(coeff, factors)])
    }

    fn factor(&mut self) -> Result<(usize, u32)> {
        let Some(Tok::Ident(name)) = self.peek().cloned() else {
            return Err(self.err("expected generator"));
        };
        let idx = self.gens.lookup(&name)?;
        self.pos += 1;
        let mut exp = 1u32;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.peek() {
                Some(Tok::Int(n)) if !n.is_zero() => {
                    exp = u32::try_from(n).map_err(|_| self.err("exponent out of range"))?;
                    self.pos += 1;
                }
                _ => return Err(self.err("expected positive exponent")),
            }
        }
        Ok((idx, exp))
    }
}

fn parse_expr(tokens: &[Token], gens: &Gens, line: usize) -> Result<AlgElement> {
    ExprParser {
        toks: tokens,
        pos: 0,
        gens,
        line,
    }
    .expr()
}

/// Parses a standalone expression over `gens`.
pub(crate) fn parse_expression(text: &str, gens: &Gens) -> Result<AlgElement> {
    let toks = tokenize(text, 1)?;
    parse_expr(&toks, gens, 1)
}

impl AlgElement {
    /// Parses an expression such as `w1*w2*t^3 + t^9` over `gens`.
    pub fn parse(text: &str, gens: &Gens) -> Result<AlgElement> {
        parse_expression(text, gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const S3S3S4: &str = "\
# S^3 x S^3 x S^4
[space s3s3s4]
gen w1 3
gen w2 3
gen w3 4
gen w4 7
d w4 = w3^2
";

    #[test]
    fn parses_example_model() {
        let m = parse_model(S3S3S4).unwrap();
        assert_eq!(m.gens().len(), 4);
        assert_eq!(m.d_by_name("w4").unwrap().to_string(), "w3^2");
        assert!(m.d_by_name("w1").unwrap().is_zero());
        assert!(m.is_minimal());
    }

    #[test]
    fn degree_mismatch() {
        let bad = S3S3S4.replace("w3^2", "w3");
        assert!(matches!(
            parse_model(&bad),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn even_sphere() {
        let m = parse_model("gen x 2\ngen y 3\nd y = x^2\n").unwrap();
        assert!(m.is_minimal());
    }

    #[test]
    fn rejects_unknown_and_duplicate() {
        assert!(matches!(
            parse_model("gen x 2\nd y = x\n"),
            Err(Error::UnknownGenerator(n)) if n == "y"
        ));
        assert!(matches!(
            parse_model("gen x 2\ngen x 4\n"),
            Err(Error::DuplicateGenerator(_))
        ));
        assert!(matches!(
            parse_model("gen x 1\n"),
            Err(Error::NotSimplyConnected { .. })
        ));
    }

    #[test]
    fn not_closed() {
        // d(d z) = d(x*y) = x^3 != 0
        let text = "gen x 2\ngen y 3\ngen z 4\nd y = x^2\nd z = x*y\n";
        assert!(matches!(parse_model(text), Err(Error::NotClosed(n)) if n == "z"));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_model("gen x 2\ngen y 3\nd y = x^^2\n") {
            Err(Error::Syntax { line, column, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(column, 9);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_model("gen x two\n"),
            Err(Error::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn expression_forms() {
        let g = Gens::new([("t", 2), ("a", 3), ("b", 5)]).unwrap();
        let e = AlgElement::parse("-1/2 t^4 + 3*a*b - b*a", &g).unwrap();
        assert_eq!(e.to_string(), "-1/2*t^4 + 4*a*b");
        assert!(AlgElement::parse("a*a", &g).unwrap().is_zero());
        assert!(AlgElement::parse("0", &g).unwrap().is_zero());
    }

    #[test]
    fn fibration_example() {
        let text = "\
[fibration cp5a]
[base]
gen t 2
[fiber]
gen u 2
gen w1 3
gen w2 9
gen w3 11
gen w4 17
d w3 = u^6
[total]
D w4 = w1*w2*t^3 + t^9
";
        let f = parse_fibration(text).unwrap();
        assert_eq!(f.total_d(3).to_string(), "u^6");
        assert_eq!(f.fiber().d_by_name("w4").unwrap().to_string(), "0");
    }

    #[test]
    fn multiple_blocks() {
        let text = format!("{S3S3S4}\n[space s3]\ngen x 3\n");
        let doc = parse_document(&text).unwrap();
        assert_eq!(doc.spaces().count(), 2);
        assert!(parse_model(&text).is_err());
    }
}
