use super::formula::Formula;
use super::hes::{Equation, Hes, Param, Sign};
use super::kind::Kind;
use super::transform::lift_lambdas;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Eq,
    Semi,
    Lambda,
    Caret,
    Dot,
    Or,
    And,
    LAngle,
    RAngle,
    LBrack,
    RBrack,
    LParen,
    RParen,
    Arrow,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Eq => "`=`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Lambda => "`\\`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Or => "`\\/`".into(),
            Tok::And => "`/\\`".into(),
            Tok::LAngle => "`<`".into(),
            Tok::RAngle => "`>`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, len) = match (c, next) {
            ('\\', Some('/')) => (Tok::Or, 2),
            ('/', Some('\\')) => (Tok::And, 2),
            ('-', Some('>')) => (Tok::Arrow, 2),
            ('\\', _) => (Tok::Lambda, 1),
            ('=', _) => (Tok::Eq, 1),
            (';', _) => (Tok::Semi, 1),
            ('^', _) => (Tok::Caret, 1),
            ('.', _) => (Tok::Dot, 1),
            ('<', _) => (Tok::LAngle, 1),
            ('>', _) => (Tok::RAngle, 1),
            ('[', _) => (Tok::LBrack, 1),
            (']', _) => (Tok::RBrack, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            (c, _) if c.is_ascii_alphabetic() || c == '_' => {
                let len = chars[i..]
                    .iter()
                    .take_while(|&&d| d.is_ascii_alphanumeric() || d == '_' || d == '\'')
                    .count();
                (Tok::Ident(chars[i..i + len].iter().collect()), len)
            }
            (c, _) => {
                return Err(Error::Syntax { line, col, msg: format!("unexpected character `{c}`") })
            }
        };
        out.push(Spanned { tok, line, col });
        i += len;
        col += len;
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        let s = &self.toks[self.pos];
        Err(Error::Syntax { line: s.line, col: s.col, msg: msg.into() })
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", t.describe(), self.peek().describe()))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            t => self.error(format!("expected identifier, found {}", t.describe())),
        }
    }

    fn equation(&mut self) -> Result<Equation> {
        let name = self.ident()?;
        if matches!(name.as_str(), "true" | "false") {
            return self.error(format!("`{name}` cannot name an equation"));
        }
        self.expect(Tok::Eq)?;
        let sign = match self.ident()?.as_str() {
            "v" => Sign::Nu,
            "m" => Sign::Mu,
            s => return self.error(format!("expected `v` or `m` after `=`, found `{s}`")),
        };
        let mut params = Vec::new();
        while *self.peek() == Tok::Lambda {
            self.bump();
            params.push(self.binder()?);
        }
        let body = self.body()?;
        self.expect(Tok::Semi)?;
        Ok(Equation::new(name, sign, params, body))
    }

    fn binder(&mut self) -> Result<Param> {
        let name = self.ident()?;
        if matches!(name.as_str(), "true" | "false") {
            return self.error(format!("`{name}` cannot be bound"));
        }
        let param = if *self.peek() == Tok::Caret {
            self.bump();
            Param::with_kind(name, self.kind()?)
        } else {
            Param::new(name)
        };
        self.expect(Tok::Dot)?;
        Ok(param)
    }

    fn kind(&mut self) -> Result<Kind> {
        let arg = match self.peek().clone() {
            Tok::Ident(s) if s == "o" => {
                self.bump();
                Kind::Prop
            }
            Tok::LParen => {
                self.bump();
                let k = self.kind()?;
                self.expect(Tok::RParen)?;
                k
            }
            t => return self.error(format!("expected a kind, found {}", t.describe())),
        };
        if *self.peek() == Tok::Arrow {
            self.bump();
            Ok(Kind::arrow(arg, self.kind()?))
        } else {
            Ok(arg)
        }
    }

    fn body(&mut self) -> Result<Formula> {
        if *self.peek() == Tok::Lambda {
            self.bump();
            let p = self.binder()?;
            let body = self.body()?;
            return Ok(Formula::abs(p.name, p.kind, body));
        }
        self.disj()
    }

    fn disj(&mut self) -> Result<Formula> {
        let mut f = self.conj()?;
        while *self.peek() == Tok::Or {
            self.bump();
            f = Formula::or(f, self.conj()?);
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Formula> {
        let mut f = self.modal()?;
        while *self.peek() == Tok::And {
            self.bump();
            f = Formula::and(f, self.modal()?);
        }
        Ok(f)
    }

    fn modal(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::LAngle => {
                self.bump();
                let a = self.ident()?;
                self.expect(Tok::RAngle)?;
                Ok(Formula::dia(a, self.modal()?))
            }
            Tok::LBrack => {
                self.bump();
                let a = self.ident()?;
                self.expect(Tok::RBrack)?;
                Ok(Formula::boxed(a, self.modal()?))
            }
            _ => self.app(),
        }
    }

    fn app(&mut self) -> Result<Formula> {
        let mut f = match self.atom()? {
            Some(f) => f,
            None => return self.error(format!("expected a formula, found {}", self.peek().describe())),
        };
        while let Some(a) = self.atom()? {
            f = Formula::app(f, a);
        }
        Ok(f)
    }

    fn atom(&mut self) -> Result<Option<Formula>> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(Some(match s.as_str() {
                    "true" => Formula::tt(),
                    "false" => Formula::ff(),
                    _ => Formula::var(s),
                }))
            }
            Tok::LParen => {
                self.bump();
                let f = self.body()?;
                self.expect(Tok::RParen)?;
                Ok(Some(f))
            }
            _ => Ok(None),
        }
    }
}

/// Parses an HES. Inner abstractions are lifted into auxiliary ν-equations
/// appended after the source equations; occurrence ids are assigned in
/// pre-order over the resulting system.
pub fn parse_hes(text: &str) -> Result<Hes> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let mut eqs = Vec::new();
    while *p.peek() != Tok::Eof {
        eqs.push(p.equation()?);
    }
    if eqs.is_empty() {
        return p.error("expected at least one equation");
    }
    let eqs = lift_lambdas(eqs)?;
    let mut hes = Hes::new(eqs)?;
    renumber(&mut hes);
    Ok(hes)
}

/// Parses a single closed or open formula (used by tests and tooling).
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let f = p.body()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {}", p.peek().describe()));
    }
    Ok(f)
}

/// Reassigns pre-order occurrence ids across all equation bodies.
pub fn renumber(hes: &mut Hes) {
    let mut next = 0;
    for e in hes.equations_mut() {
        e.body = e.body.renumber(&mut next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{OccId, Shape};
    use std::collections::HashSet;

    fn max_occ(hes: &Hes) -> Option<OccId> {
        let mut m: Option<OccId> = None;
        for e in hes.equations() {
            e.body.visit(&mut |g| {
                if g.occ() != OccId::SYNTHETIC {
                    m = Some(m.map_or(g.occ(), |x| x.max(g.occ())));
                }
            });
        }
        m
    }

    const EX3: &str = "S =v <a>(F (<b> S)); F =m \\X. X \\/ <c> S \\/ <a>(F (<b> X));";

    #[test]
    fn example3() {
        let h = parse_hes(EX3).unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!(h.eq(0).sign, Sign::Nu);
        assert_eq!(h.eq(1).sign, Sign::Mu);
        assert_eq!(h.eq(1).params.len(), 1);
        assert_eq!(h.eq(0).body.to_string(), "<a> F (<b> S)");
        assert_eq!(h.eq(1).body.to_string(), "X \\/ <c> S \\/ <a> F (<b> X)");
    }

    #[test]
    fn trivial_and_errors() {
        let h = parse_hes("S =v true;").unwrap();
        assert_eq!(h.len(), 1);
        assert!(matches!(h.eq(0).body.shape(), Shape::True));
        assert!(matches!(parse_hes("S =v (;"), Err(Error::Syntax { line: 1, .. })));
        assert!(matches!(parse_hes("S =v T; S =m true;"), Err(Error::DuplicateEquation(_))));
        assert!(matches!(parse_hes("S =v \\S. S;"), Err(Error::ParamShadowsEquation { .. })));
        assert!(matches!(parse_hes("S =v Y;"), Err(Error::Unbound(_))));
        assert!(matches!(parse_hes("S =x true;"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_hes("S =v true;\n  $"), Err(Error::Syntax { line: 2, col: 3, .. })));
    }

    #[test]
    fn precedence() {
        let f = parse_formula("<a> X /\\ Y \\/ Z W").unwrap();
        assert_eq!(f.to_string(), "<a> X /\\ Y \\/ Z W");
        match f.shape() {
            Shape::Or(l, r) => {
                assert!(matches!(l.shape(), Shape::And(..)));
                assert!(matches!(r.shape(), Shape::App(..)));
            }
            _ => panic!(),
        }
        let g = parse_formula("\\X. X \\/ Y").unwrap();
        assert!(matches!(g.shape(), Shape::Abs(..)));
    }

    #[test]
    fn kind_annotations() {
        let h = parse_hes("S =v F (\\Y. Y); F =v \\G^(o -> o). \\Z^o. G Z;").unwrap();
        let f = &h.eq(1);
        assert_eq!(f.params[0].kind, Some(Kind::arrow(Kind::Prop, Kind::Prop)));
        assert_eq!(f.params[1].kind, Some(Kind::Prop));
        // the inner abstraction is lifted into a third equation
        assert_eq!(h.len(), 3);
        assert_eq!(h.eq(2).sign, Sign::Nu);
    }

    #[test]
    fn occurrence_ids_unique() {
        let h = parse_hes(EX3).unwrap();
        let mut seen = HashSet::new();
        for e in h.equations() {
            e.body.visit(&mut |g| assert!(seen.insert(g.occ())));
        }
        assert_eq!(max_occ(&h).map(|o| o.0 as usize + 1), Some(seen.len()));
    }

    #[test]
    fn shared_param_names_are_renamed() {
        let h = parse_hes("S =v F S /\\ G S; F =v \\X. X; G =m \\X. <a> X;").unwrap();
        assert_ne!(h.eq(1).params[0].name, h.eq(2).params[0].name);
        assert_eq!(h.eq(2).body.to_string(), format!("<a> {}", h.eq(2).params[0].name));
    }
}
