//! Evaluator for the arithmetic written into CoT traces.
//!
//! Grammar: `expr := term (('+'|'-'|'−') term)*`, `term := factor (('*'|'×'|'/'|'÷') factor)*`,
//! `factor := number | '-' factor | '(' expr ')' | ('max'|'min') '(' expr (',' expr)* ')'`.

use alloc::vec::Vec;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("unexpected `{found}` at char {at}")]
    Unexpected { at: usize, found: char },
    #[error("unexpected end of expression")]
    End,
    #[error("unknown function `{0}`")]
    Function(alloc::string::String),
    #[error("division by zero")]
    DivisionByZero,
}

pub fn eval(expr: &str) -> Result<f64, ArithError> {
    let chars: Vec<char> = expr.chars().collect();
    let mut p = Parser { chars, pos: 0 };
    let v = p.expr()?;
    p.skip_ws();
    match p.peek() {
        None => Ok(v),
        Some(c) => Err(ArithError::Unexpected { at: p.pos, found: c }),
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, want: char) -> Result<(), ArithError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(ArithError::Unexpected { at: self.pos, found: c }),
            None => Err(ArithError::End),
        }
    }

    fn expr(&mut self) -> Result<f64, ArithError> {
        let mut v = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    v += self.term()?;
                }
                Some('-' | '−') => {
                    self.pos += 1;
                    v -= self.term()?;
                }
                _ => return Ok(v),
            }
        }
    }

    fn term(&mut self) -> Result<f64, ArithError> {
        let mut v = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*' | '×') => {
                    self.pos += 1;
                    v *= self.factor()?;
                }
                Some('/' | '÷') => {
                    self.pos += 1;
                    let d = self.factor()?;
                    if d == 0.0 {
                        return Err(ArithError::DivisionByZero);
                    }
                    v /= d;
                }
                _ => return Ok(v),
            }
        }
    }

    fn factor(&mut self) -> Result<f64, ArithError> {
        self.skip_ws();
        match self.peek() {
            None => Err(ArithError::End),
            Some('-' | '−') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => Ok(self.number()),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
                    self.pos += 1;
                }
                let name: alloc::string::String = self.chars[start..self.pos].iter().collect();
                let pick: fn(f64, f64) -> f64 = match name.as_str() {
                    "max" => f64::max,
                    "min" => f64::min,
                    _ => return Err(ArithError::Function(name)),
                };
                self.expect('(')?;
                let mut v = self.expr()?;
                loop {
                    self.skip_ws();
                    if self.peek() == Some(',') {
                        self.pos += 1;
                        v = pick(v, self.expr()?);
                    } else {
                        break;
                    }
                }
                self.expect(')')?;
                Ok(v)
            }
            Some(c) => Err(ArithError::Unexpected { at: self.pos, found: c }),
        }
    }

    fn number(&mut self) -> f64 {
        let mut int = 0.0;
        while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
            int = int * 10.0 + d as f64;
            self.pos += 1;
        }
        if self.peek() != Some('.') {
            return int;
        }
        self.pos += 1;
        // Parse the fraction as an integer and divide once, so "0.35" is exactly 35/100.
        let (mut frac, mut scale) = (0.0, 1.0);
        while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
            frac = frac * 10.0 + d as f64;
            scale *= 10.0;
            self.pos += 1;
        }
        (int * scale + frac) / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cot_example() {
        assert_eq!(eval("(140/(450 − 50))×100").unwrap(), 35.0);
    }

    #[test]
    fn precedence_and_functions() {
        assert_eq!(eval("1 + 2 * 3").unwrap(), 7.0);
        assert_eq!(eval("(1 + 2) * 3").unwrap(), 9.0);
        assert_eq!(eval("max(140, 88, 60)").unwrap(), 140.0);
        assert_eq!(eval("min(140, 88.5, 60.25)").unwrap(), 60.25);
        assert_eq!(eval("-3 − -4").unwrap(), 1.0);
        assert_eq!(eval("10 ÷ 4").unwrap(), 2.5);
    }

    #[test]
    fn errors() {
        assert_eq!(eval("1 +"), Err(ArithError::End));
        assert_eq!(eval("1 / 0"), Err(ArithError::DivisionByZero));
        assert!(matches!(eval("avg(1)"), Err(ArithError::Function(_))));
        assert!(matches!(eval("1 ) 2"), Err(ArithError::Unexpected { .. })));
    }
}
