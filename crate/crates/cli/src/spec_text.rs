//! Text form of a character set: `GROUP : [c, ...], [c, ...]`.
//!
//! The group is a product of factors joined by `x`: `Z`, `Z^r`, `Zm` or
//! `Zm^s`. Each element lists one integer per coordinate in the order the
//! factors were written; free coordinates are moved first and torsion
//! residues reduced, matching the library's canonical layout.

use std::fmt;

use kron_core::{CharacterSet, Error as CoreError, GroupSpec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct SpecError {
    /// Zero-based character offset into the input.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at column {}: {}", self.position + 1, self.message)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Factor {
    Free,
    Torsion(u64),
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { chars: src.chars().collect(), pos: 0, _src: src }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, SpecError> {
        Err(SpecError { position: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), SpecError> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.err(format!("expected '{c}', found '{found}'")),
                None => self.err(format!("expected '{c}', found end of input")),
            }
        }
    }

    /// Digits immediately at the cursor (no leading whitespace).
    fn digits(&mut self) -> Option<(usize, String)> {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| (start, self.chars[start..self.pos].iter().collect()))
    }

    fn unsigned(&mut self, what: &str) -> Result<u64, SpecError> {
        self.skip_ws();
        match self.digits() {
            Some((start, s)) => s
                .parse()
                .map_err(|_| SpecError { position: start, message: format!("{what} '{s}' out of range") }),
            None => self.err(format!("expected {what}")),
        }
    }

    fn integer(&mut self) -> Result<i64, SpecError> {
        self.skip_ws();
        let start = self.pos;
        let neg = if self.chars.get(self.pos) == Some(&'-') {
            self.pos += 1;
            true
        } else {
            if self.chars.get(self.pos) == Some(&'+') {
                self.pos += 1;
            }
            false
        };
        match self.digits() {
            Some((_, s)) => {
                let text = if neg { format!("-{s}") } else { s };
                text.parse()
                    .map_err(|_| SpecError { position: start, message: format!("integer '{text}' out of range") })
            }
            None => self.err("expected an integer"),
        }
    }
}

fn parse_factor(cur: &mut Cursor<'_>, out: &mut Vec<Factor>) -> Result<(), SpecError> {
    if !cur.eat('Z') {
        return match cur.peek() {
            Some(c) => cur.err(format!("expected a group factor 'Z' or 'Zm', found '{c}'")),
            None => cur.err("expected a group factor"),
        };
    }
    let factor = match cur.digits() {
        Some((start, s)) => {
            let m: u64 = s
                .parse()
                .map_err(|_| SpecError { position: start, message: format!("order '{s}' out of range") })?;
            if m < 2 {
                return Err(SpecError { position: start, message: format!("torsion order {m} must be at least 2") });
            }
            Factor::Torsion(m)
        }
        None => Factor::Free,
    };
    let count = if cur.eat('^') {
        let at = cur.pos;
        let r = cur.unsigned("exponent")?;
        if r == 0 {
            return Err(SpecError { position: at, message: "exponent must be at least 1".into() });
        }
        r
    } else {
        1
    };
    if count > 4096 {
        return cur.err(format!("exponent {count} too large"));
    }
    out.extend(std::iter::repeat_n(factor, count as usize));
    Ok(())
}

/// Parses `GROUP : elements` into a canonical character set.
pub fn parse_set_spec(text: &str) -> Result<CharacterSet, SpecError> {
    let mut cur = Cursor::new(text);
    let mut factors = Vec::new();
    parse_factor(&mut cur, &mut factors)?;
    while cur.eat('x') {
        parse_factor(&mut cur, &mut factors)?;
    }
    cur.expect(':')?;

    let free_rank = factors.iter().filter(|f| **f == Factor::Free).count();
    let orders: Vec<u64> = factors
        .iter()
        .filter_map(|f| match f {
            Factor::Torsion(m) => Some(*m),
            Factor::Free => None,
        })
        .collect();
    let group = GroupSpec::new(free_rank, orders).map_err(|e| SpecError { position: 0, message: e.to_string() })?;

    let mut elements = Vec::new();
    let mut starts = Vec::new();
    loop {
        cur.skip_ws();
        let start = cur.pos;
        cur.expect('[')?;
        let mut coords = vec![cur.integer()?];
        while cur.eat(',') {
            coords.push(cur.integer()?);
        }
        cur.expect(']')?;
        if coords.len() != factors.len() {
            return Err(SpecError {
                position: start,
                message: format!("element has {} coordinates, group has {}", coords.len(), factors.len()),
            });
        }
        let mut free = Vec::with_capacity(free_rank);
        let mut torsion = Vec::with_capacity(factors.len() - free_rank);
        for (f, c) in factors.iter().zip(coords) {
            match f {
                Factor::Free => free.push(c),
                Factor::Torsion(_) => torsion.push(c),
            }
        }
        let ch = group
            .character(free, torsion)
            .map_err(|e| SpecError { position: start, message: e.to_string() })?;
        elements.push(ch);
        starts.push(start);
        if !cur.eat(',') {
            break;
        }
    }
    if let Some(c) = cur.peek() {
        return cur.err(format!("unexpected '{c}' after the element list"));
    }
    CharacterSet::new(group, elements.clone()).map_err(|e| match e {
        CoreError::DuplicateCharacter(_) => {
            let dup = (1..elements.len())
                .find(|&i| elements[..i].contains(&elements[i]))
                .expect("a duplicate exists");
            SpecError { position: starts[dup], message: format!("duplicate element {}", elements[dup]) }
        }
        other => SpecError { position: 0, message: other.to_string() },
    })
}
