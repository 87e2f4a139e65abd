use std::fmt;

/// A symbol in a variable's alphabet.
///
/// Plain symbols are small integers. Composite symbols (produced by
/// [`crate::dist::JointDistribution::coalesce`] and
/// [`crate::dist::JointDistribution::overlay`]) are tuples of symbols, kept
/// as tuples rather than re-encoded so the original components stay visible.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Int(u64),
    Tuple(Vec<Symbol>),
}

impl Symbol {
    pub fn int(v: u64) -> Self {
        Symbol::Int(v)
    }

    pub fn pair(a: Symbol, b: Symbol) -> Self {
        Symbol::Tuple(vec![a, b])
    }

    pub fn as_int(&self) -> Option<u64> {
        match self {
            Symbol::Int(v) => Some(*v),
            Symbol::Tuple(_) => None,
        }
    }
}

impl From<u64> for Symbol {
    fn from(v: u64) -> Self {
        Symbol::Int(v)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Int(v) => write!(f, "{v}"),
            Symbol::Tuple(parts) => {
                write!(f, "(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}
