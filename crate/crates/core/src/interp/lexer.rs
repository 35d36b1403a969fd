use num_bigint::BigInt;

use super::{KispError, Phase, Pos};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Open,
    Close,
    Num(BigInt),
    Str(String),
    /// Dash-case name, optionally ending in `?`. Keywords are references too
    /// at this stage.
    Ref(String),
    /// Symbolic atom such as `+` or `<`.
    Op(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
}

const OPERATORS: &[&str] = &["+", "-", "*", "<", ">", "=", "<=", ">="];

fn is_delimiter(c: char) -> bool {
    c.is_whitespace() || c == '(' || c == ')' || c == '\'' || c == ';'
}

pub fn is_reference(word: &str) -> bool {
    let body = word.strip_suffix('?').unwrap_or(word);
    !body.is_empty()
        && body
            .split('-')
            .all(|w| !w.is_empty() && w.chars().all(|c| c.is_ascii_alphabetic()))
}

fn is_numeral(word: &str) -> bool {
    let digits = word.strip_prefix('-').unwrap_or(word);
    !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit())
}

fn classify(word: &str, pos: Pos) -> Result<TokenKind, KispError> {
    if is_numeral(word) {
        let n = word.parse().expect("checked numeral");
        Ok(TokenKind::Num(n))
    } else if is_reference(word) {
        Ok(TokenKind::Ref(word.to_string()))
    } else if OPERATORS.contains(&word) {
        Ok(TokenKind::Op(word.to_string()))
    } else if word.starts_with('-') {
        Err(KispError::new(
            Phase::Lex,
            pos,
            format!("`{word}`: names cannot start with a dash"),
        ))
    } else {
        Err(KispError::new(
            Phase::Lex,
            pos,
            format!("`{word}` is not a valid reference or numeral"),
        ))
    }
}

/// Splits source text into tokens. `;` starts a comment running to the end of
/// the line.
pub fn tokenize(src: &str) -> Result<Vec<Token>, KispError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (1u32, 1u32);

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        match c {
            c if c.is_whitespace() => {
                bump!();
            }
            ';' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump!();
                }
            }
            '(' => {
                bump!();
                out.push(Token {
                    kind: TokenKind::Open,
                    pos,
                });
            }
            ')' => {
                bump!();
                out.push(Token {
                    kind: TokenKind::Close,
                    pos,
                });
            }
            '\'' => {
                bump!();
                let mut text = String::new();
                loop {
                    match bump!() {
                        None => return Err(KispError::new(Phase::Lex, pos, "unterminated string")),
                        Some('\'') => break,
                        Some(ch) if !ch.is_ascii() || (ch.is_ascii_control() && ch != '\t') => {
                            return Err(KispError::new(
                                Phase::Lex,
                                pos,
                                format!("strings may only hold printable ASCII, found {ch:?}"),
                            ))
                        }
                        Some(ch) => text.push(ch),
                    }
                }
                out.push(Token {
                    kind: TokenKind::Str(text),
                    pos,
                });
            }
            _ => {
                let mut word = String::new();
                while chars.peek().is_some_and(|&c| !is_delimiter(c)) {
                    word.push(bump!().expect("peeked"));
                }
                out.push(Token {
                    kind: classify(&word, pos)?,
                    pos,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<TokenKind> {
        tokenize(src).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn simple_application() {
        use TokenKind::*;
        assert_eq!(
            kinds("(+ 2 3)"),
            [Open, Op("+".into()), Num(2.into()), Num(3.into()), Close]
        );
    }

    #[test]
    fn strings_keep_spaces_and_punctuation() {
        assert_eq!(
            kinds("'Hello, World!'"),
            [TokenKind::Str("Hello, World!".into())]
        );
        assert_eq!(kinds("''"), [TokenKind::Str(String::new())]);
    }

    #[test]
    fn numerals() {
        assert_eq!(
            kinds("007 -12 -0"),
            [
                TokenKind::Num(7.into()),
                TokenKind::Num((-12).into()),
                TokenKind::Num(0.into())
            ]
        );
        let big = "123456789012345678901234567890";
        assert_eq!(kinds(big), [TokenKind::Num(big.parse().unwrap())]);
    }

    #[test]
    fn references() {
        assert_eq!(
            kinds("very-long-name empty? WWII-start -"),
            [
                TokenKind::Ref("very-long-name".into()),
                TokenKind::Ref("empty?".into()),
                TokenKind::Ref("WWII-start".into()),
                TokenKind::Op("-".into()),
            ]
        );
    }

    #[test]
    fn lexical_errors() {
        for bad in [
            "-illegal",
            "'open",
            "foo-",
            "a--b",
            "x1",
            "'caf\u{e9}'",
            "foo?bar",
        ] {
            let err = tokenize(bad).unwrap_err();
            assert_eq!(err.phase, Phase::Lex, "{bad}");
        }
        let err = tokenize("(foo\n  -illegal)").unwrap_err();
        assert_eq!(err.pos, Pos { line: 2, col: 3 });
    }

    #[test]
    fn comments_are_skipped() {
        assert_eq!(kinds("; nothing\n1 ; one"), [TokenKind::Num(1.into())]);
    }
}
