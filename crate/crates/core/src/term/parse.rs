//! Recursive-descent parser for terms and equation files.
//!
//! ```text
//! term := or
//! or   := and { "||" and }
//! and  := unary { "&&" unary }
//! unary:= "!" unary | prim
//! prim := "T" | "F" | atom | var | "ite" "(" term "," term "," term ")" | "(" term ")"
//! ```
//!
//! Atoms are lowercase identifiers (`a`, `b2`, `set_1`) or single-quoted
//! strings (`'x=x+1'`, `'set:1:T'`). Variables are uppercase identifiers
//! (`X`, `Y1`). `T`, `F` and `ite` are reserved.

use thiserror::Error;

use super::{Atom, Equation, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("identifier `{name}` at offset {pos} mixes cases: atoms are lowercase, variables uppercase")]
    MixedCase { pos: usize, name: String },
    #[error("line {line}: {inner}")]
    Line {
        line: usize,
        #[source]
        inner: Box<ParseError>,
    },
}

impl ParseError {
    fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        ParseError::Syntax {
            pos,
            msg: msg.into(),
        }
    }
}

pub(crate) fn is_bare_atom_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    s != "ite" && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Bang,
    AndAnd,
    OrOr,
    LParen,
    RParen,
    Comma,
    Equals,
    Ident(String),
    Quoted(String),
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'!' => {
                out.push((Tok::Bang, i));
                i += 1;
            }
            b'(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            b',' => {
                out.push((Tok::Comma, i));
                i += 1;
            }
            b'&' if bytes.get(i + 1) == Some(&b'&') => {
                out.push((Tok::AndAnd, i));
                i += 2;
            }
            b'|' if bytes.get(i + 1) == Some(&b'|') => {
                out.push((Tok::OrOr, i));
                i += 2;
            }
            b'=' if bytes.get(i + 1) != Some(&b'=') => {
                out.push((Tok::Equals, i));
                i += 1;
            }
            b'\'' => {
                let start = i;
                let rest = &src[i + 1..];
                let end = rest
                    .find(['\'', '\n'])
                    .filter(|&e| rest.as_bytes()[e] == b'\'')
                    .ok_or_else(|| ParseError::syntax(start, "unterminated quoted atom"))?;
                if end == 0 {
                    return Err(ParseError::syntax(start, "empty quoted atom"));
                }
                out.push((Tok::Quoted(rest[..end].to_string()), start));
                i += end + 2;
            }
            c if c.is_ascii_alphanumeric() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &src[start..i];
                if !word.as_bytes()[0].is_ascii_alphabetic() {
                    return Err(ParseError::syntax(start, format!("identifier `{word}` must start with a letter")));
                }
                out.push((Tok::Ident(word.to_string()), start));
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(ParseError::syntax(i, format!("unexpected character `{ch}`")));
            }
        }
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    idx: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.idx].0
    }

    fn pos(&self) -> usize {
        self.toks[self.idx].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.idx].0.clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(ParseError::syntax(self.pos(), format!("expected {what}")))
        }
    }

    fn or(&mut self) -> Result<Term, ParseError> {
        let mut t = self.and()?;
        while *self.peek() == Tok::OrOr {
            self.bump();
            t = Term::or(t, self.and()?);
        }
        Ok(t)
    }

    fn and(&mut self) -> Result<Term, ParseError> {
        let mut t = self.unary()?;
        while *self.peek() == Tok::AndAnd {
            self.bump();
            t = Term::and(t, self.unary()?);
        }
        Ok(t)
    }

    fn unary(&mut self) -> Result<Term, ParseError> {
        if *self.peek() == Tok::Bang {
            self.bump();
            return Ok(Term::not(self.unary()?));
        }
        self.prim()
    }

    fn prim(&mut self) -> Result<Term, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::LParen => {
                let t = self.or()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Tok::Quoted(name) => Ok(Term::Atom(Atom::new(name))),
            Tok::Ident(word) => match word.as_str() {
                "T" => Ok(Term::True),
                "F" => Ok(Term::False),
                "ite" => {
                    self.expect(Tok::LParen, "`(` after `ite`")?;
                    let guard = self.or()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let then = self.or()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let otherwise = self.or()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Term::ite(guard, then, otherwise))
                }
                _ => classify(&word, pos),
            },
            Tok::End => Err(ParseError::syntax(pos, "unexpected end of input")),
            other => Err(ParseError::syntax(pos, format!("unexpected token {}", describe(&other)))),
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Bang => "`!`",
        Tok::AndAnd => "`&&`",
        Tok::OrOr => "`||`",
        Tok::LParen => "`(`",
        Tok::RParen => "`)`",
        Tok::Comma => "`,`",
        Tok::Equals => "`=`",
        Tok::Ident(_) => "identifier",
        Tok::Quoted(_) => "quoted atom",
        Tok::End => "end of input",
    }
}

fn classify(word: &str, pos: usize) -> Result<Term, ParseError> {
    let first = word.as_bytes()[0];
    let letters = word.bytes().filter(u8::is_ascii_alphabetic);
    if first.is_ascii_lowercase() && letters.clone().all(|c| c.is_ascii_lowercase()) {
        Ok(Term::Atom(Atom::new(word)))
    } else if first.is_ascii_uppercase() && letters.clone().all(|c| c.is_ascii_uppercase()) {
        Ok(Term::Var(Var::new(word)))
    } else {
        Err(ParseError::MixedCase {
            pos,
            name: word.to_string(),
        })
    }
}

/// Parse a single term.
pub fn parse(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        idx: 0,
    };
    let t = p.or()?;
    p.expect(Tok::End, "end of input")?;
    Ok(t)
}

/// Parse `name : lhs = rhs`. A name ending in `[a]` marks a scheme indexed
/// by the atom `a`.
pub fn parse_equation(line: &str) -> Result<Equation, ParseError> {
    let colon = line
        .find(':')
        .ok_or_else(|| ParseError::syntax(0, "expected `name : lhs = rhs`"))?;
    let name = line[..colon].trim();
    // primes are allowed at the end only, for duals like `SCL4'`
    if name.is_empty() || name.trim_end_matches('\'').contains(['\'', '=', ' ', '\t']) {
        return Err(ParseError::syntax(0, format!("invalid equation name `{name}`")));
    }
    let body_offset = colon + 1;
    let shift = |e: ParseError| match e {
        ParseError::Syntax { pos, msg } => ParseError::Syntax {
            pos: pos + body_offset,
            msg,
        },
        ParseError::MixedCase { pos, name } => ParseError::MixedCase {
            pos: pos + body_offset,
            name,
        },
        other => other,
    };
    let mut p = Parser {
        toks: lex(&line[body_offset..]).map_err(shift)?,
        idx: 0,
    };
    let lhs = p.or().map_err(shift)?;
    p.expect(Tok::Equals, "`=`").map_err(shift)?;
    let rhs = p.or().map_err(shift)?;
    p.expect(Tok::End, "end of equation").map_err(shift)?;

    let scheme_atom = match name.strip_suffix(']').and_then(|n| n.rsplit_once('[')) {
        Some((_, idx)) => {
            if !is_bare_atom_name(idx) {
                return Err(ParseError::syntax(0, format!("scheme index `{idx}` is not an atom")));
            }
            let atom = Atom::new(idx);
            if !lhs.atoms().contains(&atom) && !rhs.atoms().contains(&atom) {
                return Err(ParseError::syntax(0, format!("scheme atom `{idx}` does not occur in `{name}`")));
            }
            Some(atom)
        }
        None => None,
    };
    Ok(Equation {
        name: name.to_string(),
        lhs,
        rhs,
        scheme_atom,
    })
}

fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    let mut in_body = false;
    for (i, c) in line.char_indices() {
        match c {
            ':' if !in_body => in_body = true,
            '\'' if in_body => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}

/// Parse an equation file: one `name : lhs = rhs` per line, `#` comments.
pub fn parse_equation_file(text: &str) -> Result<Vec<Equation>, ParseError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_equation(line).map_err(|e| ParseError::Line {
            line: n + 1,
            inner: Box::new(e),
        })?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        assert_eq!(
            parse("a && !b").unwrap(),
            Term::and(Term::atom("a"), Term::not(Term::atom("b")))
        );
        assert_eq!(
            parse("ite(a, T, F)").unwrap(),
            Term::ite(Term::atom("a"), Term::True, Term::False)
        );
        assert_eq!(
            parse("(X || Y) && Z").unwrap(),
            Term::and(Term::or(Term::var("X"), Term::var("Y")), Term::var("Z"))
        );
    }

    #[test]
    fn operators_associate_left() {
        assert_eq!(
            parse("a && b && c").unwrap(),
            Term::and(Term::and(Term::atom("a"), Term::atom("b")), Term::atom("c"))
        );
        assert_eq!(
            parse("a || b && c").unwrap(),
            Term::or(Term::atom("a"), Term::and(Term::atom("b"), Term::atom("c")))
        );
        assert_eq!(
            parse("!a && b").unwrap(),
            Term::and(Term::not(Term::atom("a")), Term::atom("b"))
        );
    }

    #[test]
    fn quoted_atoms() {
        assert_eq!(parse("'x=x+1'").unwrap(), Term::atom("x=x+1"));
        assert_eq!(parse("'a'").unwrap(), Term::atom("a"));
        assert_eq!(
            parse("'eq:1:F' && 'set:1:T'").unwrap(),
            Term::and(Term::atom("eq:1:F"), Term::atom("set:1:T"))
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(
            parse("a && "),
            Err(ParseError::Syntax {
                pos: 5,
                msg: "unexpected end of input".into()
            })
        );
        assert!(matches!(parse("(a"), Err(ParseError::Syntax { pos: 2, .. })));
        assert!(matches!(parse("a & b"), Err(ParseError::Syntax { pos: 2, .. })));
        assert!(matches!(parse("'abc"), Err(ParseError::Syntax { pos: 0, .. })));
        assert!(matches!(parse("ite(a, b)"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("a b"), Err(ParseError::Syntax { pos: 2, .. })));
        assert!(matches!(parse("1a"), Err(ParseError::Syntax { pos: 0, .. })));
    }

    #[test]
    fn mixed_case_identifiers_are_rejected() {
        assert_eq!(
            parse("a && aB"),
            Err(ParseError::MixedCase {
                pos: 5,
                name: "aB".into()
            })
        );
        assert!(matches!(parse("Xy"), Err(ParseError::MixedCase { .. })));
    }

    #[test]
    fn equation_lines() {
        let e = parse_equation("SCL3 : !!X = X").unwrap();
        assert_eq!(e.name, "SCL3");
        assert_eq!(e.lhs, Term::not(Term::not(Term::var("X"))));
        assert_eq!(e.scheme_atom, None);

        let e = parse_equation("CPcr1[a] : ite(a, ite(a, X, Y), Z) = ite(a, X, Z)").unwrap();
        assert_eq!(e.scheme_atom, Some(Atom::new("a")));

        assert!(parse_equation("CPcr1[c] : ite(a, X, Y) = X").is_err());
        assert!(matches!(
            parse_equation("E : a && = b"),
            Err(ParseError::Syntax { pos: 9, .. })
        ));
        assert!(parse_equation("no colon here").is_err());
    }

    #[test]
    fn equation_file_with_comments() {
        let text = "# header\nE1 : 'x==2' = a # trailing\n\n  E2 : T = !F\n";
        let eqs = parse_equation_file(text).unwrap();
        assert_eq!(eqs.len(), 2);
        assert_eq!(eqs[0].lhs, Term::atom("x==2"));
        let err = parse_equation_file("E1 : a = b\nE2 : a = \n").unwrap_err();
        assert!(matches!(err, ParseError::Line { line: 2, .. }));
    }
}
