//! Certificate envelopes: JSON serialization and parsing of the three certificate kinds.

use anyhow::{anyhow, Context as _, Result};
use serde::{Deserialize, Serialize};

use bohm::ccc::{parse_arrow_with, print_arrow_with, ArrowTerm, CollapseCertificate};
use bohm::models::{Functional, ModelError, PModel};
use bohm::products::{IsoWitness, ProductCertificate};
use bohm::separator::{ModelWitness, SeparationCertificate};
use bohm::syntax::{parse_type_with, read_term_with, Context, Name, Term, Ty, TypeAliases};

pub const SCHEMA_VERSION: u32 = 1;
pub const LAMBDA: &str = "lambda-separation";
pub const PRODUCT: &str = "product-separation";
pub const COLLAPSE: &str = "ccc-collapse";

/// Types whose tree is larger than this are printed as `@alias` references.
const ALIAS_THRESHOLD: u64 = 48;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Envelope {
    pub schema_version: u32,
    pub kind: String,
    /// `(name, type)` definitions, each may refer to earlier ones.
    pub aliases: Vec<(String, String)>,
    pub payload: serde_json::Value,
    pub metadata: Metadata,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
}

impl Metadata {
    fn current() -> Metadata {
        Metadata { tool: "bohm".into(), version: env!("CARGO_PKG_VERSION").into() }
    }
}

/// A certificate with the wrong schema version or kind.
#[derive(Debug)]
pub struct SchemaMismatch(pub String);

impl std::fmt::Display for SchemaMismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for SchemaMismatch {}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermText {
    pub text: String,
    /// Free variables with their types.
    pub free: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalJson {
    pub ty: String,
    pub code: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub base: u32,
    pub raw_args: Vec<FunctionalJson>,
    pub observed: (u64, u64),
    pub relabeling: Vec<u64>,
    pub args: Vec<FunctionalJson>,
    pub kappas: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaPayload {
    pub a: TermText,
    pub b: TermText,
    pub a_prime: TermText,
    pub b_prime: TermText,
    pub bound_vars: Vec<(String, String)>,
    pub head_args: Vec<TermText>,
    pub c: TermText,
    pub d: TermText,
    pub level: usize,
    pub two_valued: Option<(TermText, TermText)>,
    pub witness: WitnessJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductPayload {
    pub a: TermText,
    pub b: TermText,
    pub iso_forward: TermText,
    pub iso_backward: TermText,
    pub components: usize,
    pub index: usize,
    pub a_prime: TermText,
    pub b_prime: TermText,
    pub iso_prime: TermText,
    pub inner: LambdaPayload,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapsePayload {
    pub f: String,
    pub g: String,
    pub object: String,
    pub separation: ProductPayload,
    pub f_prime: String,
    pub g_prime: String,
    pub context: String,
    pub derived: (String, String),
    pub schema: String,
}

/// Writes terms and types against one alias table.
pub struct Writer {
    aliases: TypeAliases,
}

impl Writer {
    pub fn new() -> Writer {
        Writer { aliases: TypeAliases::new(ALIAS_THRESHOLD) }
    }

    fn ty(&mut self, t: Ty) -> String {
        self.aliases.print_type(t)
    }

    fn term(&mut self, t: &Term) -> TermText {
        let free = t.free_vars().into_iter().map(|(n, ty)| (n.to_string(), self.ty(ty))).collect();
        TermText { text: self.aliases.print_term(t), free }
    }

    fn functional(&mut self, f: &Functional) -> FunctionalJson {
        FunctionalJson { ty: self.ty(f.ty()), code: f.code() }
    }

    fn arrow(&mut self, f: &ArrowTerm) -> String {
        print_arrow_with(f, &mut self.aliases)
    }

    pub fn lambda(&mut self, c: &SeparationCertificate) -> LambdaPayload {
        let w = &c.witness;
        LambdaPayload {
            a: self.term(&c.a),
            b: self.term(&c.b),
            a_prime: self.term(&c.a_prime),
            b_prime: self.term(&c.b_prime),
            bound_vars: c.bound_vars.iter().map(|(n, t)| (n.to_string(), self.ty(*t))).collect(),
            head_args: c.head_args.iter().map(|t| self.term(t)).collect(),
            c: self.term(&c.c),
            d: self.term(&c.d),
            level: c.level,
            two_valued: c.two_valued.as_ref().map(|(e, f)| (self.term(e), self.term(f))),
            witness: WitnessJson {
                base: w.base,
                raw_args: w.raw_args.iter().map(|f| self.functional(f)).collect(),
                observed: w.observed,
                relabeling: w.relabeling.clone(),
                args: w.args.iter().map(|f| self.functional(f)).collect(),
                kappas: w.kappas.clone(),
            },
        }
    }

    pub fn product(&mut self, c: &ProductCertificate) -> ProductPayload {
        ProductPayload {
            a: self.term(&c.a),
            b: self.term(&c.b),
            iso_forward: self.term(&c.iso.forward),
            iso_backward: self.term(&c.iso.backward),
            components: c.components,
            index: c.index,
            a_prime: self.term(&c.a_prime),
            b_prime: self.term(&c.b_prime),
            iso_prime: self.term(&c.iso_prime),
            inner: self.lambda(&c.inner),
        }
    }

    pub fn collapse(&mut self, c: &CollapseCertificate) -> CollapsePayload {
        let (p1, p2) = c.derived();
        CollapsePayload {
            f: self.arrow(&c.f),
            g: self.arrow(&c.g),
            object: self.ty(c.object),
            separation: self.product(&c.separation),
            f_prime: self.arrow(&c.f_prime),
            g_prime: self.arrow(&c.g_prime),
            context: self.arrow(&c.context),
            derived: (self.arrow(&p1), self.arrow(&p2)),
            schema: c.schema(),
        }
    }

    pub fn finish<P: Serialize>(self, kind: &str, payload: &P) -> Result<Envelope> {
        Ok(Envelope {
            schema_version: SCHEMA_VERSION,
            kind: kind.into(),
            aliases: self.aliases.defs().to_vec(),
            payload: serde_json::to_value(payload)?,
            metadata: Metadata::current(),
        })
    }
}

impl Default for Writer {
    fn default() -> Writer {
        Writer::new()
    }
}

pub fn lambda_envelope(c: &SeparationCertificate) -> Result<Envelope> {
    let mut w = Writer::new();
    let p = w.lambda(c);
    w.finish(LAMBDA, &p)
}

pub fn product_envelope(c: &ProductCertificate) -> Result<Envelope> {
    let mut w = Writer::new();
    let p = w.product(c);
    w.finish(PRODUCT, &p)
}

pub fn collapse_envelope(c: &CollapseCertificate) -> Result<Envelope> {
    let mut w = Writer::new();
    let p = w.collapse(c);
    w.finish(COLLAPSE, &p)
}

pub fn to_json(env: &Envelope) -> Result<String> {
    Ok(serde_json::to_string_pretty(env)? + "\n")
}

/// Parses the JSON and checks the schema version.
pub fn parse_envelope(text: &str) -> Result<Envelope> {
    let env: Envelope = serde_json::from_str(text).context("malformed certificate JSON")?;
    if env.schema_version != SCHEMA_VERSION {
        return Err(SchemaMismatch(format!(
            "unsupported certificate schema version {} (expected {SCHEMA_VERSION})",
            env.schema_version
        ))
        .into());
    }
    Ok(env)
}

/// A certificate of any kind.
pub enum Certificate {
    Lambda(SeparationCertificate),
    Product(ProductCertificate),
    Collapse(CollapseCertificate),
}

impl Certificate {
    pub fn envelope(&self) -> Result<Envelope> {
        match self {
            Certificate::Lambda(c) => lambda_envelope(c),
            Certificate::Product(c) => product_envelope(c),
            Certificate::Collapse(c) => collapse_envelope(c),
        }
    }
}

/// Reads terms and types against the envelope's alias table.
pub struct Reader {
    aliases: TypeAliases,
}

impl Reader {
    pub fn new(env: &Envelope) -> Result<Reader> {
        Ok(Reader { aliases: TypeAliases::from_defs(&env.aliases)? })
    }

    fn ty(&self, s: &str) -> Result<Ty> {
        Ok(parse_type_with(s, &self.aliases)?)
    }

    fn term(&self, t: &TermText) -> Result<Term> {
        let mut ctx = Context::new();
        for (n, ty) in &t.free {
            ctx.push(n, self.ty(ty)?)?;
        }
        read_term_with(&t.text, &ctx, &self.aliases).with_context(|| format!("in term {}", t.text))
    }

    fn functional(&self, base: u32, f: &FunctionalJson) -> Result<Functional> {
        let m = PModel::new(base)?;
        m.element(self.ty(&f.ty)?, f.code).map_err(|e: ModelError| anyhow!(e))
    }

    fn arrow(&self, s: &str) -> Result<ArrowTerm> {
        Ok(parse_arrow_with(s, &self.aliases)?)
    }

    pub fn lambda(&self, p: &LambdaPayload) -> Result<SeparationCertificate> {
        let w = &p.witness;
        let fun = |v: &[FunctionalJson]| v.iter().map(|f| self.functional(w.base, f)).collect::<Result<Vec<_>>>();
        Ok(SeparationCertificate {
            a: self.term(&p.a)?,
            b: self.term(&p.b)?,
            a_prime: self.term(&p.a_prime)?,
            b_prime: self.term(&p.b_prime)?,
            bound_vars: p
                .bound_vars
                .iter()
                .map(|(n, t)| Ok((Name::from(n.as_str()), self.ty(t)?)))
                .collect::<Result<_>>()?,
            head_args: p.head_args.iter().map(|t| self.term(t)).collect::<Result<_>>()?,
            c: self.term(&p.c)?,
            d: self.term(&p.d)?,
            level: p.level,
            two_valued: match &p.two_valued {
                Some((e, f)) => Some((self.term(e)?, self.term(f)?)),
                None => None,
            },
            witness: ModelWitness {
                base: w.base,
                raw_args: fun(&w.raw_args)?,
                observed: w.observed,
                relabeling: w.relabeling.clone(),
                args: fun(&w.args)?,
                kappas: w.kappas.clone(),
            },
        })
    }

    pub fn product(&self, p: &ProductPayload) -> Result<ProductCertificate> {
        Ok(ProductCertificate {
            a: self.term(&p.a)?,
            b: self.term(&p.b)?,
            iso: IsoWitness { forward: self.term(&p.iso_forward)?, backward: self.term(&p.iso_backward)? },
            components: p.components,
            index: p.index,
            a_prime: self.term(&p.a_prime)?,
            b_prime: self.term(&p.b_prime)?,
            iso_prime: self.term(&p.iso_prime)?,
            inner: self.lambda(&p.inner)?,
        })
    }

    /// The collapse certificate and the stored `(derived, schema)` texts.
    pub fn collapse(&self, p: &CollapsePayload) -> Result<(CollapseCertificate, (ArrowTerm, ArrowTerm), String)> {
        let cert = CollapseCertificate {
            f: self.arrow(&p.f)?,
            g: self.arrow(&p.g)?,
            object: self.ty(&p.object)?,
            separation: self.product(&p.separation)?,
            f_prime: self.arrow(&p.f_prime)?,
            g_prime: self.arrow(&p.g_prime)?,
            context: self.arrow(&p.context)?,
        };
        let derived = (self.arrow(&p.derived.0)?, self.arrow(&p.derived.1)?);
        Ok((cert, derived, p.schema.clone()))
    }
}

/// The derived equation and schema stored alongside a collapse certificate.
pub type Derived = ((ArrowTerm, ArrowTerm), String);

/// Decodes a certificate of the kind named in the envelope.
pub fn decode(env: &Envelope) -> Result<(Certificate, Option<Derived>)> {
    let r = Reader::new(env)?;
    let payload = env.payload.clone();
    match env.kind.as_str() {
        LAMBDA => Ok((Certificate::Lambda(r.lambda(&serde_json::from_value(payload)?)?), None)),
        PRODUCT => Ok((Certificate::Product(r.product(&serde_json::from_value(payload)?)?), None)),
        COLLAPSE => {
            let (c, derived, schema) = r.collapse(&serde_json::from_value(payload)?)?;
            Ok((Certificate::Collapse(c), Some((derived, schema))))
        }
        other => Err(SchemaMismatch(format!("unknown certificate kind {other:?}")).into()),
    }
}
