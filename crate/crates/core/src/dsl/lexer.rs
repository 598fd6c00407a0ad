use super::ast::Span;
use super::Diagnostic;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    /// `digits` or `digits/digits`, unparsed.
    Number(String),
    Arrow,
    Colon,
    Comma,
    LParen,
    RParen,
    LBrace,
    RBrace,
    /// `|`, the conditioning bar
    Bar,
    /// `||`, `∨`
    OrOr,
    /// `&`, `&&`, `∧`
    Amp,
    /// `!`, `~`, `¬`
    Bang,
    EqEq,
    NotEq,
    Assign,
    Newline,
    /// Placeholder for a character that failed to lex; a diagnostic was
    /// recorded for it.
    Invalid,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub(crate) fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Number(s) => format!("`{s}`"),
        Tok::Arrow => "`->`".into(),
        Tok::Colon => "`:`".into(),
        Tok::Comma => "`,`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::LBrace => "`{`".into(),
        Tok::RBrace => "`}`".into(),
        Tok::Bar => "`|`".into(),
        Tok::OrOr => "`||`".into(),
        Tok::Amp => "`&`".into(),
        Tok::Bang => "`!`".into(),
        Tok::EqEq => "`==`".into(),
        Tok::NotEq => "`!=`".into(),
        Tok::Assign => "`=`".into(),
        Tok::Newline => "end of line".into(),
        Tok::Invalid => "invalid input".into(),
    }
}

/// Splits `src` into tokens, ending every line (including the last) with
/// [`Tok::Newline`]. Comments run from `#` to the end of the line.
pub(crate) fn lex(src: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut tokens = Vec::new();
    let mut diags = Vec::new();
    for (line_no, line) in src.split('\n').enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        lex_line(line, line_no + 1, &mut tokens, &mut diags);
        tokens.push(Token {
            tok: Tok::Newline,
            span: Span::new(line_no + 1, line.chars().count() + 1),
        });
    }
    (tokens, diags)
}

fn lex_line(line: &str, line_no: usize, tokens: &mut Vec<Token>, diags: &mut Vec<Diagnostic>) {
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let span = Span::new(line_no, i + 1);
        let next = chars.get(i + 1).copied();
        match c {
            '#' => break,
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                tokens.push(Token {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    span,
                });
                continue;
            }
            c if c.is_ascii_digit() => {
                i = lex_number(&chars, i, line_no, tokens, diags);
                continue;
            }
            _ => {}
        }
        let (tok, width) = match (c, next) {
            ('-', Some('>')) => (Tok::Arrow, 2),
            (':', _) => (Tok::Colon, 1),
            (',', _) => (Tok::Comma, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            ('|', Some('|')) => (Tok::OrOr, 2),
            ('|', _) => (Tok::Bar, 1),
            ('∨', _) => (Tok::OrOr, 1),
            ('&', Some('&')) => (Tok::Amp, 2),
            ('&' | '∧', _) => (Tok::Amp, 1),
            ('!', Some('=')) => (Tok::NotEq, 2),
            ('!' | '~' | '¬', _) => (Tok::Bang, 1),
            ('=', Some('=')) => (Tok::EqEq, 2),
            ('=', _) => (Tok::Assign, 1),
            (other, _) => {
                let shown = if other.is_control() {
                    format!("U+{:04X}", other as u32)
                } else {
                    format!("`{other}`")
                };
                diags.push(Diagnostic::new(
                    span,
                    format!("unexpected character {shown}"),
                ));
                (Tok::Invalid, 1)
            }
        };
        tokens.push(Token { tok, span });
        i += width;
    }
}

/// Lexes `digits` or `digits/digits` starting at `start`; returns the index
/// just past it.
fn lex_number(
    chars: &[char],
    start: usize,
    line_no: usize,
    tokens: &mut Vec<Token>,
    diags: &mut Vec<Diagnostic>,
) -> usize {
    let span = Span::new(line_no, start + 1);
    let ident_char = |c: char| c.is_ascii_alphanumeric() || c == '_';
    let mut i = start;
    while i < chars.len() && chars[i].is_ascii_digit() {
        i += 1;
    }
    if i < chars.len() && chars[i] == '/' {
        i += 1;
        let den_start = i;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        if i == den_start {
            diags.push(Diagnostic::new(
                span,
                "malformed rational literal: expected digits after `/`",
            ));
            tokens.push(Token {
                tok: Tok::Invalid,
                span,
            });
            return i;
        }
    }
    if i < chars.len() && ident_char(chars[i]) {
        diags.push(Diagnostic::new(
            Span::new(line_no, i + 1),
            format!("unexpected `{}` in number", chars[i]),
        ));
        tokens.push(Token {
            tok: Tok::Invalid,
            span,
        });
        while i < chars.len() && ident_char(chars[i]) {
            i += 1;
        }
        return i;
    }
    tokens.push(Token {
        tok: Tok::Number(chars[start..i].iter().collect()),
        span,
    });
    i
}
