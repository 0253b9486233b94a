use std::io::{self, BufRead};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Line reader for the crate's text formats; errors carry 1-based line numbers.
pub(crate) struct LineReader<R> {
    inner: io::Lines<R>,
    line: usize,
}

impl<R: BufRead> LineReader<R> {
    pub fn new(r: R) -> Self {
        LineReader {
            inner: r.lines(),
            line: 0,
        }
    }

    pub fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, msg)
    }

    pub fn next(&mut self) -> Result<String> {
        self.line += 1;
        match self.inner.next() {
            Some(Ok(s)) => Ok(s),
            Some(Err(e)) => Err(Error::parse(self.line, e.to_string())),
            None => Err(Error::parse(self.line, "unexpected end of input")),
        }
    }

    pub fn expect(&mut self, exact: &str) -> Result<()> {
        let s = self.next()?;
        if s == exact {
            Ok(())
        } else {
            Err(self.err(format!("expected `{exact}`")))
        }
    }

    /// Text after `key ` on the next line.
    pub fn keyed(&mut self, key: &str) -> Result<String> {
        let s = self.next()?;
        match s.split_once(' ') {
            Some((k, rest)) if k == key => Ok(rest.to_string()),
            _ => Err(self.err(format!("expected `{key} ...`, got `{s}`"))),
        }
    }

    pub fn parse_keyed<T: FromStr>(&mut self, key: &str) -> Result<T> {
        let rest = self.keyed(key)?;
        rest.parse()
            .map_err(|_| self.err(format!("bad value `{rest}` for `{key}`")))
    }

    /// `n` whitespace-separated numbers after `key`.
    pub fn numbers(&mut self, key: &str, n: usize) -> Result<Vec<usize>> {
        let rest = self.keyed(key)?;
        let parts: Vec<_> = rest.split(' ').collect();
        if parts.len() != n {
            return Err(self.err(format!("expected {n} fields after `{key}`")));
        }
        parts
            .iter()
            .map(|p| p.parse().map_err(|_| self.err(format!("bad number `{p}`"))))
            .collect()
    }

    /// A bare value on its own line.
    pub fn bare<T: FromStr>(&mut self) -> Result<T> {
        let s = self.next()?;
        s.parse().map_err(|_| self.err(format!("bad value `{s}`")))
    }
}
