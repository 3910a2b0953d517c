use super::Diagnostic;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// Unsigned decimal integer, kept as text.
    Int(String),
    Str(String),
    Punct(char),
    Arrow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.')
}

/// Splits source into tokens; `#` starts a comment that runs to the end of the line.
pub fn lex(src: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut out = Vec::new();
    let mut diags = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let advance = |i: &mut usize, line: &mut usize, col: &mut usize| {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col);
        } else if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col);
            }
        } else if ident_start(c) {
            let mut s = String::new();
            while i < chars.len() && ident_continue(chars[i]) {
                s.push(chars[i]);
                advance(&mut i, &mut line, &mut col);
            }
            out.push(Token { tok: Tok::Ident(s), line: tl, col: tc });
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                advance(&mut i, &mut line, &mut col);
            }
            out.push(Token { tok: Tok::Int(s), line: tl, col: tc });
        } else if c == '"' {
            advance(&mut i, &mut line, &mut col);
            let mut s = String::new();
            let mut closed = false;
            while i < chars.len() {
                let d = chars[i];
                advance(&mut i, &mut line, &mut col);
                match d {
                    '"' => {
                        closed = true;
                        break;
                    }
                    '\\' if i < chars.len() => {
                        s.push(chars[i]);
                        advance(&mut i, &mut line, &mut col);
                    }
                    '\n' => break,
                    _ => s.push(d),
                }
            }
            if !closed {
                diags.push(Diagnostic::new(tl, tc, "unterminated string"));
            }
            out.push(Token { tok: Tok::Str(s), line: tl, col: tc });
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            advance(&mut i, &mut line, &mut col);
            advance(&mut i, &mut line, &mut col);
            out.push(Token { tok: Tok::Arrow, line: tl, col: tc });
        } else if "()[]{},:;=+*^/-".contains(c) {
            advance(&mut i, &mut line, &mut col);
            out.push(Token { tok: Tok::Punct(c), line: tl, col: tc });
        } else {
            diags.push(Diagnostic::new(tl, tc, format!("unexpected character {c:?}")));
            advance(&mut i, &mut line, &mut col);
        }
    }
    (out, diags)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_and_kinds() {
        let (toks, diags) = lex("rule (s0, alpha, EMPTY)\n  x1^(1/2) -> \"a\\\"b\" # note\n@");
        assert_eq!(toks[0], Token { tok: Tok::Ident("rule".into()), line: 1, col: 1 });
        assert_eq!(toks[2].tok, Tok::Ident("s0".into()));
        let arrow = toks.iter().find(|t| t.tok == Tok::Arrow).unwrap();
        assert_eq!((arrow.line, arrow.col), (2, 12));
        assert!(toks.iter().any(|t| t.tok == Tok::Str("a\"b".into())));
        assert_eq!(diags, vec![Diagnostic::new(3, 1, "unexpected character '@'")]);
    }
}
