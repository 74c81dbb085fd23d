//! Literal syntax for local-system sums:
//!
//! ```text
//! expr  := "0" | term ("+" term)*
//! term  := [int ["*"]] atom
//! atom  := ("Q" | "V[" int ("," int)* "]") ["(" signed-int ")"]
//! ```

use crate::error::Error;
use crate::rep::{partition_normalize, IrrepSum, Partition, Term};

/// Why an expression failed: bad syntax, or a partition too tall for the genus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprError {
    Syntax(String),
    Genus(String),
}

impl ExprError {
    pub fn at_line(self, line: usize, genus: u32) -> Error {
        match self {
            ExprError::Syntax(message) => Error::Parse { line, message },
            ExprError::Genus(partition) => Error::GenusMismatch {
                line,
                partition,
                genus,
            },
        }
    }
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn number(&mut self) -> Option<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some('-') {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        match self.src[start..self.pos].parse() {
            Ok(n) => Some(n),
            Err(_) => {
                self.pos = start;
                None
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    fn error(&self, what: &str) -> ExprError {
        ExprError::Syntax(format!(
            "{what} at column {} in '{}'",
            self.pos + 1,
            self.src.trim()
        ))
    }
}

pub fn parse_partition(src: &str, genus: u32) -> Result<Partition, ExprError> {
    let mut cur = Cursor::new(src);
    let p = atom_partition(&mut cur, genus)?;
    if !cur.at_end() {
        return Err(cur.error("trailing input"));
    }
    Ok(p)
}

fn atom_partition(cur: &mut Cursor<'_>, genus: u32) -> Result<Partition, ExprError> {
    if cur.eat('Q') {
        return Ok(Partition::trivial());
    }
    if !cur.eat('V') {
        return Err(cur.error("expected 'Q' or 'V[...]'"));
    }
    cur.expect('[')?;
    let mut raw = Vec::new();
    if !cur.eat(']') {
        loop {
            let n = cur.number().ok_or_else(|| cur.error("expected a part"))?;
            raw.push(n);
            if cur.eat(']') {
                break;
            }
            cur.expect(',')?;
        }
    }
    partition_normalize(&raw, genus).map_err(|e| match e {
        Error::TooManyRows { .. } => ExprError::Genus(format!("V{raw:?}").replace(' ', "")),
        other => ExprError::Syntax(other.to_string()),
    })
}

fn term(cur: &mut Cursor<'_>, genus: u32) -> Result<(Term, u64), ExprError> {
    let mult = match cur.number() {
        Some(n) if n > 0 => {
            cur.eat('*');
            n as u64
        }
        Some(_) => return Err(cur.error("multiplicity must be positive")),
        None => 1,
    };
    let partition = atom_partition(cur, genus)?;
    let twist = if cur.eat('(') {
        let t = cur.number().ok_or_else(|| cur.error("expected a twist"))?;
        cur.expect(')')?;
        Some(i32::try_from(t).map_err(|_| cur.error("twist out of range"))?)
    } else {
        None
    };
    Ok((Term::new(partition, twist), mult))
}

/// Parses an expression whose partitions must fit `genus` rows.
pub fn parse_expr(src: &str, genus: u32) -> Result<IrrepSum, ExprError> {
    let mut cur = Cursor::new(src);
    if cur.at_end() {
        return Err(cur.error("empty expression"));
    }
    let save = cur.pos;
    if cur.number() == Some(0) && cur.at_end() {
        return Ok(IrrepSum::zero());
    }
    cur.pos = save;
    let mut sum = IrrepSum::zero();
    loop {
        let (t, m) = term(&mut cur, genus)?;
        sum.push(t, m);
        if cur.at_end() {
            return Ok(sum);
        }
        cur.expect('+')?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_table_rows() {
        let s = parse_expr("V[2,2] + V[1,1] + 2 Q", 2).unwrap();
        assert_eq!(s.to_string(), "V[2,2] + V[1,1] + 2 Q");
        assert_eq!(s.count(), 4);
        assert_eq!(parse_expr("3*Q", 0).unwrap(), IrrepSum::trivial(3));
        assert!(parse_expr("0", 3).unwrap().is_zero());
        let t = parse_expr("V[2](-2) + 2 Q(-3)", 1).unwrap();
        assert_eq!(t.to_string(), "V[2](-2) + 2 Q(-3)");
        assert_eq!(parse_expr("V[]", 1).unwrap(), IrrepSum::trivial(1));
        assert_eq!(parse_expr("V[1,1,0]", 2).unwrap().to_string(), "V[1,1]");
    }

    #[test]
    fn rejects_tall_partitions() {
        assert_eq!(
            parse_expr("V[1,1,1]", 2),
            Err(ExprError::Genus("V[1,1,1]".into()))
        );
        assert!(matches!(parse_expr("V[1]", 0), Err(ExprError::Genus(_))));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "Q +", "V[1,", "W", "Q Q", "0 Q", "V[1,2]", "Q(x)"] {
            assert!(
                matches!(parse_expr(bad, 3), Err(ExprError::Syntax(_))),
                "{bad}"
            );
        }
    }
}
