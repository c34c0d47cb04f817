use crate::error::ParseError;
use crate::factory::FormulaFactory;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    /// A core operator or punctuation, in its canonical unicode spelling.
    Sym(&'static str),
    /// A symbol token declared by an extension operator.
    ExtSym(String),
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub start: usize,
    pub end: usize,
}

/// Core tokens with their accepted spellings. Longer spellings are tried
/// first.
const SYMBOLS: &[(&str, &str)] = &[
    ("<=>", "⇔"),
    ("|->", "↦"),
    ("=>", "⇒"),
    ("/=", "≠"),
    ("<:", "⊆"),
    ("..", "‥"),
    ("**", "×"),
    ("\\/", "∪"),
    ("/\\", "∩"),
    ("{}", "∅"),
    ("⊤", "⊤"),
    ("⊥", "⊥"),
    ("¬", "¬"),
    ("∧", "∧"),
    ("&", "∧"),
    ("∨", "∨"),
    ("⇒", "⇒"),
    ("⇔", "⇔"),
    ("∀", "∀"),
    ("!", "∀"),
    ("∃", "∃"),
    ("#", "∃"),
    ("·", "·"),
    (".", "·"),
    ("=", "="),
    ("≠", "≠"),
    ("∈", "∈"),
    ("⊆", "⊆"),
    ("+", "+"),
    ("−", "−"),
    ("-", "−"),
    ("∗", "∗"),
    ("*", "∗"),
    ("÷", "÷"),
    ("/", "÷"),
    ("‥", "‥"),
    ("↦", "↦"),
    ("∅", "∅"),
    ("ℙ", "ℙ"),
    ("×", "×"),
    ("∪", "∪"),
    ("∩", "∩"),
    (";", ";"),
    ("(", "("),
    (")", ")"),
    ("{", "{"),
    ("}", "}"),
    (",", ","),
    ("⦂", "⦂"),
    ("ℤ", "ℤ"),
];

const WORDS: &[(&str, &str)] = &[
    ("not", "¬"),
    ("or", "∨"),
    ("POW", "ℙ"),
    ("INT", "ℤ"),
    ("oftype", "⦂"),
    ("TRUE", "TRUE"),
    ("FALSE", "FALSE"),
    ("BOOL", "BOOL"),
];

fn is_ident_start(c: char) -> bool {
    c == '_' || (c.is_alphabetic() && !"ℤℙ".contains(c))
}

fn is_ident_continue(c: char) -> bool {
    c == '_' || c == '\'' || (c.is_alphanumeric() && !"ℤℙ".contains(c))
}

pub fn tokenize(text: &str, ff: &FormulaFactory) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut ext: Vec<Vec<char>> = ff.symbol_tokens().map(|s| s.chars().collect()).collect();
    ext.sort_by_key(|s| std::cmp::Reverse(s.len()));
    let symbols: Vec<(Vec<char>, &'static str)> = SYMBOLS.iter().map(|(s, c)| (s.chars().collect(), *c)).collect();

    let mut out = Vec::new();
    let mut i = 0;
    'outer: while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        for sym in &ext {
            if chars[i..].starts_with(sym) {
                out.push(Token { tok: Tok::ExtSym(sym.iter().collect()), start: i, end: i + sym.len() });
                i += sym.len();
                continue 'outer;
            }
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let value =
                digits.parse::<i64>().map_err(|_| ParseError::syntax(start, i, "integer literal out of range"))?;
            out.push(Token { tok: Tok::Int(value), start, end: i });
            continue;
        }
        if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_continue(chars[i]) {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let tok = match WORDS.iter().find(|(w, _)| *w == word) {
                Some((_, canon)) => Tok::Sym(canon),
                None => Tok::Ident(word),
            };
            out.push(Token { tok, start, end: i });
            continue;
        }
        for (spelling, canon) in &symbols {
            if chars[i..].starts_with(spelling) {
                out.push(Token { tok: Tok::Sym(canon), start: i, end: i + spelling.len() });
                i += spelling.len();
                continue 'outer;
            }
        }
        return Err(ParseError::syntax(i, i + 1, format!("unexpected character `{c}`")));
    }
    out.push(Token { tok: Tok::Eof, start: chars.len(), end: chars.len() });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s, &FormulaFactory::core()).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn ascii_spellings_map_to_unicode() {
        assert_eq!(
            toks("a |-> b => c"),
            vec![
                Tok::Ident("a".into()),
                Tok::Sym("↦"),
                Tok::Ident("b".into()),
                Tok::Sym("⇒"),
                Tok::Ident("c".into()),
                Tok::Eof
            ]
        );
        assert_eq!(toks("1..3")[1], Tok::Sym("‥"));
        assert_eq!(toks("POW(INT)")[0], Tok::Sym("ℙ"));
    }

    #[test]
    fn primes_in_identifiers() {
        assert_eq!(toks("x''")[0], Tok::Ident("x''".into()));
    }

    #[test]
    fn rejects_stray_characters() {
        assert!(tokenize("x @ y", &FormulaFactory::core()).is_err());
    }
}
