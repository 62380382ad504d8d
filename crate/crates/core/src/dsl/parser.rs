use thiserror::Error;

use super::ast::{Arg, Call};

#[derive(Debug, Error, Clone, PartialEq)]
#[error("parse error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

/// Parses one call; trailing whitespace is allowed, anything else is an error.
pub fn parse_call(src: &str) -> Result<Call, ParseError> {
    let mut p = Parser { src, at: 0 };
    p.ws();
    let call = p.call()?;
    p.ws();
    if p.at != src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(call)
}

/// Parses a call starting at byte `start` and returns it with the end offset.
pub fn parse_call_prefix(src: &str, start: usize) -> Result<(Call, usize), ParseError> {
    let mut p = Parser { src, at: start };
    let call = p.call()?;
    Ok((call, p.at))
}

struct Parser<'a> {
    src: &'a str,
    at: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ParseError {
        ParseError { offset: self.at, message: message.into() }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.at..].chars().next()
    }

    fn ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.at += self.peek().map_or(0, char::len_utf8);
        }
    }

    fn eat(&mut self, c: char) -> Result<(), ParseError> {
        self.ws();
        if self.peek() == Some(c) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.ws();
        let start = self.at;
        if !self.peek().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') {
            return Err(self.error("expected identifier"));
        }
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            self.at += 1;
        }
        Ok(self.src[start..self.at].to_string())
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        self.ws();
        let start = self.at;
        if self.peek() == Some('-') {
            self.at += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
            self.at += 1;
        }
        self.src[start..self.at].parse().map_err(|_| ParseError { offset: start, message: "expected number".into() })
    }

    fn call(&mut self) -> Result<Call, ParseError> {
        let name = self.ident()?;
        self.eat('(')?;
        self.ws();
        let mut args = Vec::new();
        if self.peek() == Some(')') {
            self.at += 1;
            return Ok(Call { name, args });
        }
        loop {
            args.push(self.arg()?);
            self.ws();
            match self.peek() {
                Some(',') => self.at += 1,
                Some(')') => {
                    self.at += 1;
                    return Ok(Call { name, args });
                }
                _ => return Err(self.error("expected ',' or ')'")),
            }
        }
    }

    fn list(&mut self) -> Result<Vec<Arg>, ParseError> {
        self.eat('[')?;
        self.ws();
        let mut items = Vec::new();
        if self.peek() == Some(']') {
            self.at += 1;
            return Ok(items);
        }
        loop {
            items.push(self.arg()?);
            self.ws();
            match self.peek() {
                Some(',') => self.at += 1,
                Some(']') => {
                    self.at += 1;
                    return Ok(items);
                }
                _ => return Err(self.error("expected ',' or ']'")),
            }
        }
    }

    fn arg(&mut self) -> Result<Arg, ParseError> {
        self.ws();
        match self.peek() {
            Some('[') => Ok(Arg::List(self.list()?)),
            Some(c) if c.is_ascii_digit() || c == '-' || c == '.' => Ok(Arg::Number(self.number()?)),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let name = self.ident()?;
                self.ws();
                match self.peek() {
                    Some('=') => {
                        self.at += 1;
                        Ok(Arg::Pair(name, self.number()?))
                    }
                    Some('[') => Ok(Arg::Tagged(name, self.list()?)),
                    _ => Ok(Arg::Ident(name)),
                }
            }
            _ => Err(self.error("expected argument")),
        }
    }
}
