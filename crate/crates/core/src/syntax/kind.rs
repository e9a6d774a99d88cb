use std::fmt;
use std::sync::Arc;

/// Simple type of a formula: the proposition kind `o` or an arrow.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Prop,
    Arrow(Arc<Kind>, Arc<Kind>),
}

impl Kind {
    pub fn arrow(arg: Kind, result: Kind) -> Kind {
        Kind::Arrow(Arc::new(arg), Arc::new(result))
    }

    /// `a1 -> ... -> an -> result`
    pub fn from_args<'a>(args: impl DoubleEndedIterator<Item = &'a Kind>, result: Kind) -> Kind {
        args.rev().fold(result, |acc, a| Kind::arrow(a.clone(), acc))
    }

    pub fn is_prop(&self) -> bool {
        matches!(self, Kind::Prop)
    }

    pub fn order(&self) -> usize {
        match self {
            Kind::Prop => 0,
            Kind::Arrow(a, r) => (a.order() + 1).max(r.order()),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Kind::Prop => 0,
            Kind::Arrow(_, r) => 1 + r.arity(),
        }
    }

    /// Argument kinds, outermost first.
    pub fn args(&self) -> Vec<&Kind> {
        let mut out = Vec::new();
        let mut k = self;
        while let Kind::Arrow(a, r) = k {
            out.push(&**a);
            k = r;
        }
        out
    }

    /// The kind left after applying `n` arguments.
    pub fn after(&self, n: usize) -> Option<&Kind> {
        let mut k = self;
        for _ in 0..n {
            match k {
                Kind::Arrow(_, r) => k = r,
                Kind::Prop => return None,
            }
        }
        Some(k)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Prop => write!(f, "o"),
            Kind::Arrow(a, r) if a.is_prop() => write!(f, "o -> {r}"),
            Kind::Arrow(a, r) => write!(f, "({a}) -> {r}"),
        }
    }
}

impl fmt::Debug for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_and_display() {
        let oo = Kind::arrow(Kind::Prop, Kind::Prop);
        assert_eq!(oo.order(), 1);
        let k = Kind::arrow(oo.clone(), Kind::Prop);
        assert_eq!(k.order(), 2);
        assert_eq!(k.to_string(), "(o -> o) -> o");
        let k3 = Kind::arrow(Kind::Prop, oo.clone());
        assert_eq!(k3.order(), 1);
        assert_eq!(k3.to_string(), "o -> o -> o");
        assert_eq!(k3.arity(), 2);
        assert_eq!(k3.after(1), Some(&oo));
        assert_eq!(Kind::Prop.order(), 0);
    }
}
