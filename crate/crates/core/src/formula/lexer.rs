use super::FormulaError;
use crate::rational::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Number(Rational),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Bang,
    Amp,
    Bar,
    Arrow,
    DoubleArrow,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    Plus,
    Minus,
    Star,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{}'", s),
            Tok::Number(n) => format!("number {}", n),
            Tok::Eof => "end of input".to_string(),
            other => format!("'{}'", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Dot => ".",
            Tok::Bang => "!",
            Tok::Amp => "&",
            Tok::Bar => "|",
            Tok::Arrow => "->",
            Tok::DoubleArrow => "<->",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::Eq => "=",
            Tok::Ne => "!=",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Ident(_) | Tok::Number(_) | Tok::Eof => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

/// Splits formula text into tokens with 1-based line/column positions.
/// `#` starts a comment running to the end of the line.
pub(crate) fn tokenize(text: &str) -> Result<Vec<Spanned>, FormulaError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, message: String| FormulaError::Syntax { line, col, message };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let peek = |k: usize| chars.get(i + k).copied();
        let scan = |mut j: usize, pred: fn(char) -> bool| {
            while j < chars.len() && pred(chars[j]) {
                j += 1;
            }
            j
        };
        let (tok, len) = if c.is_ascii_alphabetic() || c == '_' {
            let end = scan(i, |c| c.is_ascii_alphanumeric() || c == '_');
            (Tok::Ident(chars[i..end].iter().collect()), end - i)
        } else if c.is_ascii_digit() {
            let mut end = scan(i, |c| c.is_ascii_digit());
            if end + 1 < chars.len()
                && (chars[end] == '.' || chars[end] == '/')
                && chars[end + 1].is_ascii_digit()
            {
                end = scan(end + 1, |c| c.is_ascii_digit());
            }
            let lexeme: String = chars[i..end].iter().collect();
            let value = parse_rational(&lexeme)
                .ok_or_else(|| err(line, col, format!("invalid number '{}'", lexeme)))?;
            (Tok::Number(value), end - i)
        } else {
            match (c, peek(1), peek(2)) {
                ('<', Some('-'), Some('>')) => (Tok::DoubleArrow, 3),
                ('<', Some('='), _) => (Tok::Le, 2),
                ('>', Some('='), _) => (Tok::Ge, 2),
                ('!', Some('='), _) => (Tok::Ne, 2),
                ('-', Some('>'), _) => (Tok::Arrow, 2),
                ('<', _, _) => (Tok::Lt, 1),
                ('>', _, _) => (Tok::Gt, 1),
                ('=', _, _) => (Tok::Eq, 1),
                ('!', _, _) => (Tok::Bang, 1),
                ('-', _, _) => (Tok::Minus, 1),
                ('(', _, _) => (Tok::LParen, 1),
                (')', _, _) => (Tok::RParen, 1),
                ('[', _, _) => (Tok::LBracket, 1),
                (']', _, _) => (Tok::RBracket, 1),
                (',', _, _) => (Tok::Comma, 1),
                ('.', _, _) => (Tok::Dot, 1),
                ('&', _, _) => (Tok::Amp, 1),
                ('|', _, _) => (Tok::Bar, 1),
                ('+', _, _) => (Tok::Plus, 1),
                ('*', _, _) => (Tok::Star, 1),
                _ => return Err(err(line, col, format!("unexpected character '{}'", c))),
            }
        };
        out.push(Spanned { tok, line, col });
        i += len;
        col += len;
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn operators_use_longest_match() {
        assert_eq!(
            toks("<-> <= < -> - != !"),
            vec![
                Tok::DoubleArrow,
                Tok::Le,
                Tok::Lt,
                Tok::Arrow,
                Tok::Minus,
                Tok::Ne,
                Tok::Bang,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn numbers_and_positions() {
        let t = tokenize("# c\n  1/6 0.25 3").unwrap();
        assert_eq!(t[0].tok, Tok::Number(ratio(1, 6)));
        assert_eq!((t[0].line, t[0].col), (2, 3));
        assert_eq!(t[1].tok, Tok::Number(ratio(1, 4)));
        assert_eq!(t[2].tok, Tok::Number(ratio(3, 1)));
    }

    #[test]
    fn zero_denominator_is_rejected() {
        assert!(matches!(
            tokenize("1/0"),
            Err(FormulaError::Syntax { line: 1, col: 1, .. })
        ));
    }

    #[test]
    fn stray_character() {
        assert!(matches!(
            tokenize("a $"),
            Err(FormulaError::Syntax { line: 1, col: 3, .. })
        ));
    }
}
