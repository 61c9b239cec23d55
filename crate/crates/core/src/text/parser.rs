use std::collections::HashMap;

use super::lexer::{tokenize, Tok, Token};
use super::{ParseError, SourceLocation};
use crate::ir::{
    verify_function, Attribute, Attributes, DialectRegistry, Function, Module, OpKind, TypeRef,
    ValueId,
};

/// Parses and verifies a module. Verification failures are reported at
/// the location of the offending operation.
pub fn parse_module(text: &str, registry: &DialectRegistry) -> Result<Module, ParseError> {
    let (module, locations) = Parser::new(text, registry)?.module()?;
    for (func, locs) in module.functions().iter().zip(&locations) {
        if let Some(d) = verify_function(func, registry).into_iter().next() {
            let at = d
                .op_index
                .and_then(|i| locs.ops.get(i).copied())
                .unwrap_or(locs.func);
            return Err(ParseError::new(at, d.message));
        }
    }
    Ok(module)
}

/// Parses without running the verifier. Syntax, SSA scoping, operand
/// types, and registered schemas are still enforced.
pub fn parse_module_unverified(
    text: &str,
    registry: &DialectRegistry,
) -> Result<Module, ParseError> {
    Ok(Parser::new(text, registry)?.module()?.0)
}

/// Like [`parse_module`], for input that may not be valid UTF-8.
pub fn parse_module_bytes(bytes: &[u8], registry: &DialectRegistry) -> Result<Module, ParseError> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_module(text, registry),
        Err(e) => {
            let valid = &bytes[..e.valid_up_to()];
            let prefix = std::str::from_utf8(valid).unwrap_or_default();
            let line = prefix.matches('\n').count() + 1;
            let column = prefix.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
            Err(ParseError::new(
                SourceLocation { line, column },
                "input is not valid UTF-8",
            ))
        }
    }
}

struct FunctionLocations {
    func: SourceLocation,
    ops: Vec<SourceLocation>,
}

struct Parser<'r> {
    toks: Vec<Token>,
    pos: usize,
    registry: &'r DialectRegistry,
}

impl<'r> Parser<'r> {
    fn new(text: &str, registry: &'r DialectRegistry) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
            registry,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn loc(&self) -> SourceLocation {
        self.toks[self.pos].loc
    }

    fn advance(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_expected(&self, what: &str) -> ParseError {
        ParseError {
            location: self.loc(),
            message: format!("expected {what}, found {}", self.peek().describe()),
            expected: Some(what.to_string()),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Token, ParseError> {
        if *self.peek() == tok {
            Ok(self.advance())
        } else {
            Err(self.error_expected(what))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, SourceLocation), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let loc = self.loc();
                self.advance();
                Ok((s, loc))
            }
            _ => Err(self.error_expected(what)),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<SourceLocation, ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                let loc = self.loc();
                self.advance();
                Ok(loc)
            }
            _ => Err(self.error_expected(&format!("'{kw}'"))),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn module(mut self) -> Result<(Module, Vec<FunctionLocations>), ParseError> {
        self.keyword("module")?;
        let mut module = Module::new();
        if self.at_keyword("attributes") {
            self.advance();
            module.attributes = self.attrs()?;
        }
        self.expect(Tok::LBrace, "'{'")?;
        let mut locations = Vec::new();
        while self.at_keyword("func") {
            let (f, locs) = self.function()?;
            if module.function(f.name()).is_some() {
                return Err(ParseError::new(
                    locs.func,
                    format!("redefinition of function @{}", f.name()),
                ));
            }
            module.add_function(f).expect("name checked above");
            locations.push(locs);
        }
        self.expect(Tok::RBrace, "'func' or '}'")?;
        self.expect(Tok::Eof, "end of input")?;
        Ok((module, locations))
    }

    fn function(&mut self) -> Result<(Function, FunctionLocations), ParseError> {
        let func_loc = self.keyword("func")?;
        self.expect(Tok::At, "'@'")?;
        let (name, _) = self.ident("function name")?;
        self.expect(Tok::LParen, "'('")?;
        self.expect(Tok::RParen, "')'")?;
        let mut func = Function::new(name);
        if self.at_keyword("attributes") {
            self.advance();
            func.attributes = self.attrs()?;
        }
        self.expect(Tok::LBrace, "'{'")?;
        let mut scope: HashMap<String, ValueId> = HashMap::new();
        let mut ops = Vec::new();
        while *self.peek() != Tok::RBrace {
            ops.push(self.operation(&mut func, &mut scope)?);
        }
        self.advance();
        Ok((
            func,
            FunctionLocations {
                func: func_loc,
                ops,
            },
        ))
    }

    fn operation(
        &mut self,
        func: &mut Function,
        scope: &mut HashMap<String, ValueId>,
    ) -> Result<SourceLocation, ParseError> {
        let start = self.loc();
        let mut result_names = Vec::new();
        if matches!(self.peek(), Tok::Value(_)) {
            loop {
                let loc = self.loc();
                match self.advance().tok {
                    Tok::Value(n) => result_names.push((n, loc)),
                    _ => unreachable!(),
                }
                if *self.peek() != Tok::Comma {
                    break;
                }
                self.advance();
                if !matches!(self.peek(), Tok::Value(_)) {
                    return Err(self.error_expected("result value name"));
                }
            }
            self.expect(Tok::Equals, "'='")?;
        }

        if !matches!(self.peek(), Tok::Ident(_)) {
            return Err(self.error_expected("operation name or '}'"));
        }
        let (dialect, kind_loc) = self.ident("dialect name")?;
        self.expect(Tok::Dot, "'.'")?;
        let (op_name, _) = self.ident("operation name")?;
        let kind = OpKind::new(dialect, op_name);
        if self.registry.op_schema(&kind).is_none() {
            return Err(ParseError::new(
                kind_loc,
                format!("unknown operation '{kind}'"),
            ));
        }

        self.expect(Tok::LParen, "'('")?;
        let mut operands = Vec::new();
        if *self.peek() != Tok::RParen {
            loop {
                let loc = self.loc();
                let name = match self.peek().clone() {
                    Tok::Value(n) => n,
                    _ => return Err(self.error_expected("operand value")),
                };
                self.advance();
                let v = *scope.get(&name).ok_or_else(|| {
                    ParseError::new(loc, format!("use of undefined value %{name}"))
                })?;
                operands.push((v, name, loc));
                if *self.peek() != Tok::Comma {
                    break;
                }
                self.advance();
            }
        }
        self.expect(Tok::RParen, "')'")?;

        let attributes = if *self.peek() == Tok::LBrace {
            self.attrs()?
        } else {
            Attributes::new()
        };

        self.expect(Tok::Colon, "':'")?;
        let sig_loc = self.loc();
        self.expect(Tok::LParen, "'('")?;
        let operand_types = self.type_list(Tok::RParen)?;
        self.expect(Tok::RParen, "')'")?;
        self.expect(Tok::Arrow, "'->'")?;
        let result_types = if *self.peek() == Tok::LParen {
            self.advance();
            let types = self.type_list(Tok::RParen)?;
            self.expect(Tok::RParen, "')'")?;
            types
        } else {
            vec![self.ty()?]
        };

        if operand_types.len() != operands.len() {
            return Err(ParseError::new(
                sig_loc,
                format!(
                    "signature lists {} operand type(s) but the operation has {} operand(s)",
                    operand_types.len(),
                    operands.len()
                ),
            ));
        }
        for ((v, name, loc), ty) in operands.iter().zip(&operand_types) {
            let actual = func.value_type(*v);
            if actual != ty {
                return Err(ParseError::new(
                    *loc,
                    format!("type mismatch for operand %{name}: value has type {actual}, signature says {ty}"),
                ));
            }
        }
        if result_types.len() != result_names.len() {
            return Err(ParseError::new(
                sig_loc,
                format!(
                    "signature lists {} result type(s) but {} result name(s) are bound",
                    result_types.len(),
                    result_names.len()
                ),
            ));
        }

        let op = func
            .create_operation(
                self.registry,
                kind,
                operands.iter().map(|(v, _, _)| *v).collect(),
                result_types,
                attributes,
            )
            .map_err(|e| ParseError::new(start, e.to_string()))?;
        func.append(op)
            .map_err(|e| ParseError::new(start, e.to_string()))?;
        let results = func.op(op).results().to_vec();
        for ((name, loc), v) in result_names.into_iter().zip(results) {
            if scope.insert(name.clone(), v).is_some() {
                return Err(ParseError::new(
                    loc,
                    format!("redefinition of value %{name}"),
                ));
            }
        }
        Ok(start)
    }

    fn type_list(&mut self, close: Tok) -> Result<Vec<TypeRef>, ParseError> {
        let mut types = Vec::new();
        if *self.peek() == close {
            return Ok(types);
        }
        loop {
            types.push(self.ty()?);
            if *self.peek() != Tok::Comma {
                return Ok(types);
            }
            self.advance();
        }
    }

    fn ty(&mut self) -> Result<TypeRef, ParseError> {
        let loc = self.loc();
        let ty = match self.peek().clone() {
            Tok::Bang => {
                self.advance();
                let (dialect, _) = self.ident("dialect name")?;
                self.expect(Tok::Dot, "'.'")?;
                let (name, _) = self.ident("type name")?;
                TypeRef::new(dialect, name)
            }
            Tok::Ident(s) if s == "f64" || s == "i1" || s == "i64" => {
                self.advance();
                TypeRef::new(crate::ir::BUILTIN_DIALECT, s)
            }
            _ => return Err(self.error_expected("a type")),
        };
        if !self.registry.has_type(&ty) {
            return Err(ParseError::new(loc, format!("unknown type {ty}")));
        }
        Ok(ty)
    }

    fn attrs(&mut self) -> Result<Attributes, ParseError> {
        self.expect(Tok::LBrace, "'{'")?;
        let mut attrs = Attributes::new();
        loop {
            let key_loc = self.loc();
            let (mut key, _) = self.ident("attribute name")?;
            while *self.peek() == Tok::Dot && matches!(self.peek_at(1), Tok::Ident(_)) {
                self.advance();
                let (part, _) = self.ident("attribute name")?;
                key.push('.');
                key.push_str(&part);
            }
            self.expect(Tok::Equals, "'='")?;
            let value = self.attr_value()?;
            if attrs.insert(key.clone(), value).is_some() {
                return Err(ParseError::new(
                    key_loc,
                    format!("duplicate attribute '{key}'"),
                ));
            }
            if *self.peek() != Tok::Comma {
                break;
            }
            self.advance();
        }
        self.expect(Tok::RBrace, "',' or '}'")?;
        Ok(attrs)
    }

    fn attr_value(&mut self) -> Result<Attribute, ParseError> {
        let v = match self.peek().clone() {
            Tok::Int(v) => Attribute::Int(v),
            Tok::Float(v) => Attribute::Float(v),
            Tok::Str(s) => Attribute::Str(s),
            Tok::LBracket => {
                self.advance();
                let mut ints = Vec::new();
                let mut strs = Vec::new();
                if *self.peek() != Tok::RBracket {
                    loop {
                        match self.peek().clone() {
                            Tok::Int(v) if strs.is_empty() => ints.push(v),
                            Tok::Str(s) if ints.is_empty() => strs.push(s),
                            _ => return Err(self.error_expected("array element of the same kind")),
                        }
                        self.advance();
                        if *self.peek() != Tok::Comma {
                            break;
                        }
                        self.advance();
                    }
                }
                self.expect(Tok::RBracket, "',' or ']'")?;
                return Ok(if strs.is_empty() {
                    Attribute::IntArray(ints)
                } else {
                    Attribute::StrArray(strs)
                });
            }
            _ => return Err(self.error_expected("attribute value")),
        };
        self.advance();
        Ok(v)
    }
}
