use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Float(f64),
    Str(String),
    Sym(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub start: usize,
    pub end: usize,
}

const SYMBOLS: &[&str] = &[
    "=>", "->", "::", "&&", "||", "(", ")", "[", "]", "{", "}", ",", ";", "/", ":", "*", "+", "-", ">", "<",
    "=", "|", "\\", ".",
];

fn ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
            continue;
        }
        let rest = &src[i..];
        if rest.starts_with("//") {
            while let Some(&(_, c)) = it.peek() {
                if c == '\n' {
                    break;
                }
                it.next();
            }
            continue;
        }
        if c == 'λ' {
            it.next();
            out.push(Token { tok: Tok::Sym("\\"), start: i, end: i + c.len_utf8() });
            continue;
        }
        // `-nord`, `-est`, `-nord_nb`, `-est_nb` are single names.
        if c == '-' {
            let word: String = rest[1..].chars().take_while(|&c| ident_char(c)).collect();
            if matches!(word.as_str(), "nord" | "est" | "nord_nb" | "est_nb") {
                let end = i + 1 + word.len();
                out.push(Token { tok: Tok::Ident(src[i..end].to_string()), start: i, end });
                while it.peek().is_some_and(|&(j, _)| j < end) {
                    it.next();
                }
                continue;
            }
        }
        if c.is_alphabetic() || c == '_' {
            let mut end = i;
            while let Some(&(j, c)) = it.peek() {
                if !ident_char(c) {
                    break;
                }
                end = j + c.len_utf8();
                it.next();
            }
            out.push(Token { tok: Tok::Ident(src[i..end].to_string()), start: i, end });
            continue;
        }
        if c.is_ascii_digit() {
            let mut end = i;
            let mut seen_dot = false;
            while let Some(&(j, c)) = it.peek() {
                if c.is_ascii_digit() {
                    end = j + 1;
                    it.next();
                } else if c == '.' && !seen_dot && src[j + 1..].starts_with(|d: char| d.is_ascii_digit()) {
                    seen_dot = true;
                    end = j + 1;
                    it.next();
                } else {
                    break;
                }
            }
            let text = &src[i..end];
            let tok = if seen_dot {
                Tok::Float(text.parse().map_err(|_| ParseError::syntax(src, i, "bad float literal"))?)
            } else {
                Tok::Int(text.parse().map_err(|_| ParseError::syntax(src, i, "integer literal out of range"))?)
            };
            out.push(Token { tok, start: i, end });
            continue;
        }
        if c == '"' {
            it.next();
            let mut s = String::new();
            let mut end = None;
            while let Some((j, c)) = it.next() {
                match c {
                    '"' => {
                        end = Some(j + 1);
                        break;
                    }
                    '\\' => match it.next() {
                        Some((_, 'n')) => s.push('\n'),
                        Some((_, 't')) => s.push('\t'),
                        Some((_, '"')) => s.push('"'),
                        Some((_, '\\')) => s.push('\\'),
                        _ => return Err(ParseError::syntax(src, j, "bad escape in string literal")),
                    },
                    c => s.push(c),
                }
            }
            let end = end.ok_or_else(|| ParseError::syntax(src, i, "unterminated string literal"))?;
            out.push(Token { tok: Tok::Str(s), start: i, end });
            continue;
        }
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                out.push(Token { tok: Tok::Sym(s), start: i, end: i + s.len() });
                for _ in 0..s.chars().count() {
                    it.next();
                }
            }
            None => return Err(ParseError::syntax(src, i, &alloc::format!("unexpected character `{c}`"))),
        }
    }
    out.push(Token { tok: Tok::Eof, start: src.len(), end: src.len() });
    Ok(out)
}
