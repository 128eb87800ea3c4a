use std::fmt;

use crate::rational::{fmt_rat, Rat};

/// A letter of a free-group word: `+i` is the i-th generator, `-i` its inverse.
pub type Letter = i8;

/// Group element in canonical normal form.
///
/// Two elements of the same model are equal iff their normal forms are equal,
/// so the derived `Eq`, `Hash` and `Ord` are the group-level notions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    /// Integer tuple in ℤⁿ.
    Vector(Vec<i64>),
    /// Freely reduced word.
    Word(Vec<Letter>),
    /// Least nonnegative residue in ℤ/m.
    Residue(u64),
    /// Dyadic rational in lowest terms (additive group).
    Dyadic(Rat),
    /// Component tuple of a direct product.
    Tuple(Vec<GroupElement>),
}

impl GroupElement {
    pub fn vector(coords: impl Into<Vec<i64>>) -> Self {
        GroupElement::Vector(coords.into())
    }

    /// Builds a reduced word from arbitrary letters.
    pub fn word(letters: &[Letter]) -> Self {
        let mut out = Vec::with_capacity(letters.len());
        push_reduced(&mut out, letters);
        GroupElement::Word(out)
    }

    pub fn dyadic(numer: i64, denom: i64) -> Self {
        GroupElement::Dyadic(Rat::new(numer, denom))
    }

    pub fn as_vector(&self) -> Option<&[i64]> {
        match self {
            GroupElement::Vector(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_word(&self) -> Option<&[Letter]> {
        match self {
            GroupElement::Word(w) => Some(w),
            _ => None,
        }
    }

    /// Length of a free-group word, 0 for other kinds.
    pub fn word_len(&self) -> usize {
        self.as_word().map_or(0, <[Letter]>::len)
    }
}

/// Appends `letters` to `out`, cancelling adjacent inverse pairs.
pub(crate) fn push_reduced(out: &mut Vec<Letter>, letters: &[Letter]) {
    for &l in letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
}

pub(crate) fn invert_word(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|l| -l).collect()
}

pub(crate) fn letter_char(l: Letter) -> char {
    let idx = l.unsigned_abs() - 1;
    if l > 0 {
        (b'a' + idx) as char
    } else {
        (b'A' + idx) as char
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Vector(v) if v.len() == 1 => write!(f, "{}", v[0]),
            GroupElement::Vector(v) => {
                f.write_str("(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
            GroupElement::Word(w) if w.is_empty() => f.write_str("1"),
            GroupElement::Word(w) => {
                for &l in w {
                    write!(f, "{}", letter_char(l))?;
                }
                Ok(())
            }
            GroupElement::Residue(r) => write!(f, "{r}"),
            GroupElement::Dyadic(q) => f.write_str(&fmt_rat(q)),
            GroupElement::Tuple(parts) => {
                f.write_str("[")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(";")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str("]")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_reduce_on_construction() {
        assert_eq!(GroupElement::word(&[1, -1]), GroupElement::Word(vec![]));
        assert_eq!(GroupElement::word(&[1, 2, -2, 1]), GroupElement::Word(vec![1, 1]));
    }

    #[test]
    fn display_forms() {
        assert_eq!(GroupElement::vector([1, 0]).to_string(), "(1,0)");
        assert_eq!(GroupElement::vector([-7]).to_string(), "-7");
        assert_eq!(GroupElement::word(&[1, 2, -1, -2]).to_string(), "abAB");
        assert_eq!(GroupElement::Word(vec![]).to_string(), "1");
        assert_eq!(GroupElement::dyadic(6, 8).to_string(), "3/4");
        let t = GroupElement::Tuple(vec![GroupElement::vector([1, 2]), GroupElement::Residue(3)]);
        assert_eq!(t.to_string(), "[(1,2);3]");
    }
}
