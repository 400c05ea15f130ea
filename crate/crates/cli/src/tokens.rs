use std::io::{self, BufRead};

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TokenMode {
    /// One token per line, without the line terminator. Empty lines count.
    Line,
    /// Tokens separated by ASCII whitespace.
    Word,
}

/// Feeds every token of `reader` to `sink`, one line in memory at a time.
pub fn for_each_token<R: BufRead>(
    mut reader: R,
    mode: TokenMode,
    mut sink: impl FnMut(&[u8]),
) -> io::Result<()> {
    let mut line = Vec::new();
    loop {
        line.clear();
        if reader.read_until(b'\n', &mut line)? == 0 {
            return Ok(());
        }
        let mut body = line.as_slice();
        if let Some(rest) = body.strip_suffix(b"\n") {
            body = rest;
        }
        if let Some(rest) = body.strip_suffix(b"\r") {
            body = rest;
        }
        match mode {
            TokenMode::Line => sink(body),
            TokenMode::Word => body
                .split(|b| b.is_ascii_whitespace())
                .filter(|w| !w.is_empty())
                .for_each(&mut sink),
        }
    }
}
