use super::{ParseError, SourceLocation};

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    /// `%name`, stored without the `%`.
    Value(String),
    Int(i64),
    Float(f64),
    Str(String),
    At,
    Bang,
    Dot,
    Comma,
    Colon,
    Equals,
    Arrow,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Value(s) => format!("value %{s}"),
            Tok::Int(v) => format!("integer {v}"),
            Tok::Float(v) => format!("float {v:?}"),
            Tok::Str(_) => "string literal".into(),
            Tok::At => "'@'".into(),
            Tok::Bang => "'!'".into(),
            Tok::Dot => "'.'".into(),
            Tok::Comma => "','".into(),
            Tok::Colon => "':'".into(),
            Tok::Equals => "'='".into(),
            Tok::Arrow => "'->'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub loc: SourceLocation,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl Lexer<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn loc(&self) -> SourceLocation {
        SourceLocation {
            line: self.line,
            column: self.column,
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    fn skip_trivia(&mut self) -> Result<(), ParseError> {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('/') => {
                    let loc = self.loc();
                    self.bump();
                    if self.peek() != Some('/') {
                        return Err(ParseError::new(loc, "unexpected character '/'"));
                    }
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn number(&mut self, loc: SourceLocation) -> Result<Tok, ParseError> {
        let mut text = String::new();
        if self.peek() == Some('-') {
            text.push('-');
            self.bump();
            if self.peek() == Some('i') {
                let word = self.take_while(is_ident_char);
                return if word == "inf" {
                    Ok(Tok::Float(f64::NEG_INFINITY))
                } else {
                    Err(ParseError::new(loc, format!("invalid number '-{word}'")))
                };
            }
        }
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            return Err(ParseError::new(loc, "expected digits after '-'"));
        }
        text.push_str(&digits);
        let mut is_float = false;
        if self.peek() == Some('.') {
            is_float = true;
            text.push('.');
            self.bump();
            let frac = self.take_while(|c| c.is_ascii_digit());
            if frac.is_empty() {
                return Err(ParseError::new(loc, "expected digits after '.' in number"));
            }
            text.push_str(&frac);
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            is_float = true;
            text.push('e');
            self.bump();
            if let Some(sign @ ('+' | '-')) = self.peek() {
                text.push(sign);
                self.bump();
            }
            let exp = self.take_while(|c| c.is_ascii_digit());
            if exp.is_empty() {
                return Err(ParseError::new(loc, "expected digits in exponent"));
            }
            text.push_str(&exp);
        }
        if self.peek().is_some_and(is_ident_start) {
            return Err(ParseError::new(loc, "invalid suffix on number"));
        }
        if is_float {
            text.parse::<f64>()
                .map(Tok::Float)
                .map_err(|_| ParseError::new(loc, format!("invalid float '{text}'")))
        } else {
            text.parse::<i64>()
                .map(Tok::Int)
                .map_err(|_| ParseError::new(loc, format!("integer '{text}' out of range")))
        }
    }

    fn string(&mut self, loc: SourceLocation) -> Result<Tok, ParseError> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => {
                    return Err(ParseError::new(loc, "unterminated string literal"))
                }
                Some('"') => return Ok(Tok::Str(s)),
                Some('\\') => match self.bump() {
                    Some('"') => s.push('"'),
                    Some('\\') => s.push('\\'),
                    Some('n') => s.push('\n'),
                    Some('t') => s.push('\t'),
                    _ => return Err(ParseError::new(loc, "invalid escape in string literal")),
                },
                Some(c) => s.push(c),
            }
        }
    }

    fn next_token(&mut self) -> Result<Token, ParseError> {
        self.skip_trivia()?;
        let loc = self.loc();
        let Some(c) = self.peek() else {
            return Ok(Token { tok: Tok::Eof, loc });
        };
        let single = |t: Tok| Some(t);
        let punct = match c {
            '@' => single(Tok::At),
            '!' => single(Tok::Bang),
            '.' => single(Tok::Dot),
            ',' => single(Tok::Comma),
            ':' => single(Tok::Colon),
            '=' => single(Tok::Equals),
            '{' => single(Tok::LBrace),
            '}' => single(Tok::RBrace),
            '(' => single(Tok::LParen),
            ')' => single(Tok::RParen),
            '[' => single(Tok::LBracket),
            ']' => single(Tok::RBracket),
            _ => None,
        };
        if let Some(tok) = punct {
            self.bump();
            return Ok(Token { tok, loc });
        }
        let tok = match c {
            '-' => {
                // `->` or a negative number
                let mut ahead = self.chars.clone();
                ahead.next();
                if ahead.peek() == Some(&'>') {
                    self.bump();
                    self.bump();
                    Tok::Arrow
                } else {
                    self.number(loc)?
                }
            }
            '0'..='9' => self.number(loc)?,
            '"' => self.string(loc)?,
            '%' => {
                self.bump();
                let name = self.take_while(is_ident_char);
                if name.is_empty() {
                    return Err(ParseError::new(loc, "expected a value name after '%'"));
                }
                Tok::Value(name)
            }
            c if is_ident_start(c) => {
                let word = self.take_while(is_ident_char);
                match word.as_str() {
                    "inf" => Tok::Float(f64::INFINITY),
                    "NaN" => Tok::Float(f64::NAN),
                    _ => Tok::Ident(word),
                }
            }
            c => {
                return Err(ParseError::new(
                    loc,
                    format!("unexpected character '{}'", c.escape_default()),
                ))
            }
        };
        Ok(Token { tok, loc })
    }
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut lx = Lexer {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut out = Vec::new();
    loop {
        let t = lx.next_token()?;
        let done = t.tok == Tok::Eof;
        out.push(t);
        if done {
            return Ok(out);
        }
    }
}
