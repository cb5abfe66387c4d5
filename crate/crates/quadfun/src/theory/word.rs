//! Freely reduced words in a free group, with substitution and a
//! text parser for word input.

use crate::Error;

/// Letters are +-(1..=rank); the vector is always freely reduced.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Word(Vec<i32>);

/// Exponent bound for the parser; keeps adversarial input from
/// expanding into huge allocations.
const MAX_PARSED_EXPONENT: i64 = 4096;

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: i32) -> Self {
        assert!(l != 0);
        Word(vec![l])
    }

    /// Builds a word, freely reducing the input letters.
    pub fn from_letters(letters: impl IntoIterator<Item = i32>) -> Self {
        let mut out: Vec<i32> = Vec::new();
        for l in letters {
            assert!(l != 0, "letter indices are nonzero");
            if out.last().map_or(false, |&last| last == -l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::from_letters(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&l| -l).collect())
    }

    pub fn power(&self, n: i64) -> Word {
        let base = if n >= 0 { self.clone() } else { self.inverse() };
        let mut out = Word::empty();
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Substitutes letter i by images[i-1] (and inverses accordingly).
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out: Vec<i32> = Vec::new();
        for &l in &self.0 {
            let idx = (l.unsigned_abs() as usize) - 1;
            assert!(idx < images.len(), "substitution image missing");
            let img = if l > 0 {
                images[idx].clone()
            } else {
                images[idx].inverse()
            };
            for &m in img.letters() {
                if out.last().map_or(false, |&last| last == -m) {
                    out.pop();
                } else {
                    out.push(m);
                }
            }
        }
        Word(out)
    }

    /// Largest letter index used (0 for the empty word).
    pub fn max_letter(&self) -> usize {
        self.0.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Exponent-sum vector over letters 1..=rank.
    pub fn abelianization(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0i64; rank];
        for &l in &self.0 {
            let idx = (l.unsigned_abs() as usize) - 1;
            assert!(idx < rank);
            v[idx] += l.signum() as i64;
        }
        v
    }

    /// Parses a word. Letters `a`..`z` are generators 1..26, capitals
    /// their inverses; an optional `^` exponent (possibly negative)
    /// follows a letter. Whitespace, `*` and `.` separate factors.
    ///
    /// `max_rank` bounds the admissible generator index.
    pub fn parse(input: &str, max_rank: usize) -> Result<Word, Error> {
        let mut letters: Vec<i32> = Vec::new();
        let mut chars = input.chars().peekable();
        while let Some(c) = chars.next() {
            if c.is_whitespace() || c == '*' || c == '.' {
                continue;
            }
            let base: i32 = match c {
                'a'..='z' => (c as u8 - b'a') as i32 + 1,
                'A'..='Z' => -((c as u8 - b'A') as i32 + 1),
                _ => {
                    return Err(Error::Schema(format!("unexpected character '{}' in word", c)));
                }
            };
            if base.unsigned_abs() as usize > max_rank {
                return Err(Error::Schema(format!(
                    "letter '{}' exceeds rank {}",
                    c, max_rank
                )));
            }
            let mut exp: i64 = 1;
            if chars.peek() == Some(&'^') {
                chars.next();
                let mut sign = 1i64;
                if chars.peek() == Some(&'-') {
                    chars.next();
                    sign = -1;
                }
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                if digits.is_empty() {
                    return Err(Error::Schema("exponent digits missing after '^'".into()));
                }
                let mag: i64 = digits
                    .parse()
                    .map_err(|_| Error::Schema("exponent out of range".into()))?;
                if mag > MAX_PARSED_EXPONENT {
                    return Err(Error::Schema(format!(
                        "exponent {} exceeds limit {}",
                        mag, MAX_PARSED_EXPONENT
                    )));
                }
                exp = sign * mag;
            }
            let letter = if exp >= 0 { base } else { -base };
            for _ in 0..exp.unsigned_abs() {
                if letters.last().map_or(false, |&last| last == -letter) {
                    letters.pop();
                } else {
                    letters.push(letter);
                }
            }
        }
        Ok(Word(letters))
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for &l in &self.0 {
            let idx = (l.unsigned_abs() as u8) - 1;
            let c = if l > 0 {
                (b'a' + idx) as char
            } else {
                (b'A' + idx) as char
            };
            write!(f, "{}", c)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_concat() {
        let w = Word::from_letters([1, 2, -2, -1, 3]);
        assert_eq!(w.letters(), &[3]);
        let a = Word::from_letters([1, 2]);
        let b = Word::from_letters([-2, 1]);
        assert_eq!(a.concat(&b).letters(), &[1, 1]);
        assert!(a.concat(&a.inverse()).is_empty());
    }

    #[test]
    fn substitution_oracle() {
        // x1 x2 under (x1 -> x1 x2, x2 -> x2^-1) reduces to x1
        let w = Word::from_letters([1, 2]);
        let images = vec![Word::from_letters([1, 2]), Word::from_letters([-2])];
        assert_eq!(w.substitute(&images).letters(), &[1]);
    }

    #[test]
    fn parse_words() {
        assert_eq!(Word::parse("abAB", 2).unwrap().letters(), &[1, 2, -1, -2]);
        assert_eq!(Word::parse("a^3", 1).unwrap().letters(), &[1, 1, 1]);
        assert_eq!(Word::parse("a^-2", 1).unwrap().letters(), &[-1, -1]);
        assert_eq!(Word::parse("a * b . a", 2).unwrap().letters(), &[1, 2, 1]);
        assert_eq!(Word::parse("aA", 1).unwrap().letters(), &[] as &[i32]);
        assert!(Word::parse("c", 2).is_err());
        assert!(Word::parse("a^999999", 1).is_err());
        assert!(Word::parse("a^", 1).is_err());
        assert!(Word::parse("3", 1).is_err());
    }

    #[test]
    fn abelianization_counts() {
        let w = Word::parse("aabA", 2).unwrap();
        assert_eq!(w.abelianization(2), vec![1, 1]);
    }
}
