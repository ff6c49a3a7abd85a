use super::Diagnostic;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(super) enum Tok {
    Ident(String),
    Int(u32),
    Str(String),
    LBrace,
    RBrace,
    Semi,
    Colon,
    Eq,
    Caret,
    Star,
}

impl Tok {
    pub(super) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Str(_) => "string".to_string(),
            Tok::LBrace => "`{`".to_string(),
            Tok::RBrace => "`}`".to_string(),
            Tok::Semi => "`;`".to_string(),
            Tok::Colon => "`:`".to_string(),
            Tok::Eq => "`=`".to_string(),
            Tok::Caret => "`^`".to_string(),
            Tok::Star => "`*`".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub(super) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

// Parentheses, slashes, dots and primes are allowed so that names such as
// `SO(5)`, `SU(4)/C2` and `Z/2` can be written verbatim.
fn ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '(' | ')' | '/' | '.' | '-' | '\'')
}

/// Tokenises the whole input. Lexing stops at the first bad character or
/// unterminated string; the tokens read so far are returned alongside the
/// diagnostic.
pub(super) fn lex(text: &str) -> (Vec<Token>, Option<Diagnostic>) {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, column);
        let push = |tokens: &mut Vec<Token>, tok| {
            tokens.push(Token {
                tok,
                line: tl,
                column: tc,
            })
        };
        match c {
            c if c.is_whitespace() => {
                bump!();
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
            }
            '{' | '}' | ';' | ':' | '=' | '^' | '*' => {
                bump!();
                let tok = match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    ';' => Tok::Semi,
                    ':' => Tok::Colon,
                    '=' => Tok::Eq,
                    '^' => Tok::Caret,
                    _ => Tok::Star,
                };
                push(&mut tokens, tok);
            }
            '"' => {
                bump!();
                let mut s = String::new();
                loop {
                    match bump!() {
                        None | Some('\n') => {
                            return (
                                tokens,
                                Some(Diagnostic {
                                    line: tl,
                                    column: tc,
                                    message: "unterminated string".to_string(),
                                }),
                            );
                        }
                        Some('"') => break,
                        Some('\\') => match bump!() {
                            Some(e @ ('"' | '\\')) => s.push(e),
                            _ => {
                                return (
                                    tokens,
                                    Some(Diagnostic {
                                        line,
                                        column,
                                        message: "invalid escape in string".to_string(),
                                    }),
                                );
                            }
                        },
                        Some(ch) => s.push(ch),
                    }
                }
                push(&mut tokens, Tok::Str(s));
            }
            c if c.is_ascii_digit() => {
                let mut value: u32 = 0;
                let mut overflow = false;
                while let Some(&d) = chars.peek() {
                    let Some(v) = d.to_digit(10) else { break };
                    bump!();
                    match value.checked_mul(10).and_then(|x| x.checked_add(v)) {
                        Some(x) => value = x,
                        None => overflow = true,
                    }
                }
                if overflow {
                    return (
                        tokens,
                        Some(Diagnostic {
                            line: tl,
                            column: tc,
                            message: "integer literal too large".to_string(),
                        }),
                    );
                }
                push(&mut tokens, Tok::Int(value));
            }
            c if ident_start(c) => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !ident_continue(d) {
                        break;
                    }
                    s.push(d);
                    bump!();
                }
                push(&mut tokens, Tok::Ident(s));
            }
            other => {
                return (
                    tokens,
                    Some(Diagnostic {
                        line: tl,
                        column: tc,
                        message: format!("unexpected character {other:?}"),
                    }),
                );
            }
        }
    }
    (tokens, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn idents_keep_parentheses() {
        let (toks, err) = lex("space SO(5) { cohomology R over Z/2; } # tail");
        assert!(err.is_none());
        let kinds: Vec<Tok> = toks.into_iter().map(|t| t.tok).collect();
        assert_eq!(
            kinds,
            vec![
                Tok::Ident("space".into()),
                Tok::Ident("SO(5)".into()),
                Tok::LBrace,
                Tok::Ident("cohomology".into()),
                Tok::Ident("R".into()),
                Tok::Ident("over".into()),
                Tok::Ident("Z/2".into()),
                Tok::Semi,
                Tok::RBrace,
            ]
        );
    }

    #[test]
    fn exponent_splits_identifier() {
        let (toks, _) = lex("x1^2");
        assert_eq!(toks.len(), 3);
        assert_eq!(toks[1].tok, Tok::Caret);
        assert_eq!(toks[2].column, 4);
    }

    #[test]
    fn string_escapes_and_errors() {
        let (toks, err) = lex(r#""a \"q\" \\ b""#);
        assert!(err.is_none());
        assert_eq!(toks[0].tok, Tok::Str(r#"a "q" \ b"#.into()));
        let (_, err) = lex("\n  \"open");
        let err = err.unwrap();
        assert_eq!((err.line, err.column), (2, 3));
        let (_, err) = lex("99999999999");
        assert!(err.is_some());
        let (_, err) = lex("a @ b");
        assert_eq!(err.unwrap().column, 3);
    }
}
