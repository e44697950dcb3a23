//! Strict DER decoding and encoding.
//!
//! Builds a TLV tree ([`DerNode`]) from raw bytes and renders it back. The
//! decoder is deliberately strict: indefinite lengths and non-minimal
//! length or tag encodings are rejected, because certificates are required
//! to be DER and a lint tool must see exactly what a verifier sees.

use num_bigint::BigInt;
use thiserror::Error;

/// Hard cap on input size. Real certificates are a few kilobytes.
pub const MAX_INPUT_LEN: usize = 1 << 20;

/// Maximum nesting depth of constructed nodes.
pub const MAX_DEPTH: usize = 32;

/// Universal tag numbers used throughout the crate.
pub mod tag {
    pub const BOOLEAN: u32 = 1;
    pub const INTEGER: u32 = 2;
    pub const BIT_STRING: u32 = 3;
    pub const OCTET_STRING: u32 = 4;
    pub const NULL: u32 = 5;
    pub const OBJECT_IDENTIFIER: u32 = 6;
    pub const UTF8_STRING: u32 = 12;
    pub const SEQUENCE: u32 = 16;
    pub const SET: u32 = 17;
    pub const PRINTABLE_STRING: u32 = 19;
    pub const TELETEX_STRING: u32 = 20;
    pub const IA5_STRING: u32 = 22;
    pub const UTC_TIME: u32 = 23;
    pub const GENERALIZED_TIME: u32 = 24;
    pub const UNIVERSAL_STRING: u32 = 28;
    pub const BMP_STRING: u32 = 30;
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DerError {
    #[error("empty input")]
    EmptyInput,
    #[error("input of {0} bytes exceeds the {MAX_INPUT_LEN} byte limit")]
    InputTooLarge(usize),
    #[error("length field exceeds available bytes at offset {0}")]
    TruncatedInput(usize),
    #[error("indefinite length at offset {0} (BER form, forbidden in DER)")]
    IndefiniteLength(usize),
    #[error("non-minimal length encoding at offset {0}")]
    NonMinimalLength(usize),
    #[error("non-minimal tag encoding at offset {0}")]
    NonMinimalTag(usize),
    #[error("tag number at offset {0} is too large")]
    TagOverflow(usize),
    #[error("{0} trailing byte(s) after a complete DER value")]
    TrailingGarbage(usize),
    #[error("nesting depth exceeds {MAX_DEPTH}")]
    DepthLimit,
    #[error("empty object identifier content")]
    EmptyContent,
    #[error("object identifier arc is unterminated (final byte has continuation bit set)")]
    UnterminatedArc,
    #[error("non-minimal object identifier arc (leading 0x80 byte)")]
    NonMinimalArc,
    #[error("object identifier arc exceeds 64 bits")]
    ArcOverflow,
    #[error("invalid object identifier: {0}")]
    InvalidOid(String),
    #[error("bad time value: {0}")]
    BadFormat(String),
    #[error("expected {expected}, found tag {found}")]
    UnexpectedTag { expected: &'static str, found: u32 },
    #[error("malformed {0} content")]
    MalformedContent(&'static str),
}

/// ASN.1 tag class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TagClass {
    Universal,
    Application,
    ContextSpecific,
    Private,
}

impl TagClass {
    fn from_byte(b: u8) -> TagClass {
        match b >> 6 {
            0 => TagClass::Universal,
            1 => TagClass::Application,
            2 => TagClass::ContextSpecific,
            _ => TagClass::Private,
        }
    }

    fn bits(self) -> u8 {
        match self {
            TagClass::Universal => 0b0000_0000,
            TagClass::Application => 0b0100_0000,
            TagClass::ContextSpecific => 0b1000_0000,
            TagClass::Private => 0b1100_0000,
        }
    }
}

/// Content of a node: raw bytes for primitive encodings, child nodes for
/// constructed ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DerContent {
    Primitive(Vec<u8>),
    Constructed(Vec<DerNode>),
}

/// One node of a parsed TLV tree.
///
/// Lengths are derived from the content rather than stored, so a node can
/// never disagree with its own encoding: `total_len = header_len +
/// content_len` holds by construction, and re-encoding a parsed node
/// reproduces the input bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerNode {
    pub tag_class: TagClass,
    pub tag_number: u32,
    pub content: DerContent,
}

impl DerNode {
    pub fn primitive(tag_class: TagClass, tag_number: u32, content: Vec<u8>) -> DerNode {
        DerNode { tag_class, tag_number, content: DerContent::Primitive(content) }
    }

    pub fn constructed(tag_class: TagClass, tag_number: u32, children: Vec<DerNode>) -> DerNode {
        DerNode { tag_class, tag_number, content: DerContent::Constructed(children) }
    }

    pub fn sequence(children: Vec<DerNode>) -> DerNode {
        Self::constructed(TagClass::Universal, tag::SEQUENCE, children)
    }

    pub fn set(children: Vec<DerNode>) -> DerNode {
        Self::constructed(TagClass::Universal, tag::SET, children)
    }

    /// Explicitly tagged context-specific wrapper, e.g. `[0] { ... }`.
    pub fn context(tag_number: u32, children: Vec<DerNode>) -> DerNode {
        Self::constructed(TagClass::ContextSpecific, tag_number, children)
    }

    pub fn integer(value: &BigInt) -> DerNode {
        Self::primitive(TagClass::Universal, tag::INTEGER, value.to_signed_bytes_be())
    }

    pub fn integer_u64(value: u64) -> DerNode {
        Self::integer(&BigInt::from(value))
    }

    pub fn boolean(value: bool) -> DerNode {
        Self::primitive(TagClass::Universal, tag::BOOLEAN, vec![if value { 0xFF } else { 0x00 }])
    }

    pub fn null() -> DerNode {
        Self::primitive(TagClass::Universal, tag::NULL, Vec::new())
    }

    pub fn oid(oid: &Oid) -> DerNode {
        Self::primitive(TagClass::Universal, tag::OBJECT_IDENTIFIER, oid.to_der_content())
    }

    pub fn octet_string(bytes: Vec<u8>) -> DerNode {
        Self::primitive(TagClass::Universal, tag::OCTET_STRING, bytes)
    }

    pub fn bit_string(unused_bits: u8, bytes: Vec<u8>) -> DerNode {
        let mut content = Vec::with_capacity(bytes.len() + 1);
        content.push(unused_bits);
        content.extend_from_slice(&bytes);
        Self::primitive(TagClass::Universal, tag::BIT_STRING, content)
    }

    pub fn printable_string(s: &str) -> DerNode {
        Self::primitive(TagClass::Universal, tag::PRINTABLE_STRING, s.as_bytes().to_vec())
    }

    pub fn utf8_string(s: &str) -> DerNode {
        Self::primitive(TagClass::Universal, tag::UTF8_STRING, s.as_bytes().to_vec())
    }

    pub fn ia5_string(s: &str) -> DerNode {
        Self::primitive(TagClass::Universal, tag::IA5_STRING, s.as_bytes().to_vec())
    }

    pub fn teletex_string(s: &str) -> DerNode {
        let bytes = s.chars().map(|c| if (c as u32) < 256 { c as u8 } else { b'?' }).collect();
        Self::primitive(TagClass::Universal, tag::TELETEX_STRING, bytes)
    }

    pub fn bmp_string(s: &str) -> DerNode {
        let mut bytes = Vec::with_capacity(s.len() * 2);
        for unit in s.encode_utf16() {
            bytes.extend_from_slice(&unit.to_be_bytes());
        }
        Self::primitive(TagClass::Universal, tag::BMP_STRING, bytes)
    }

    pub fn universal_string(s: &str) -> DerNode {
        let mut bytes = Vec::with_capacity(s.len() * 4);
        for c in s.chars() {
            bytes.extend_from_slice(&(c as u32).to_be_bytes());
        }
        Self::primitive(TagClass::Universal, tag::UNIVERSAL_STRING, bytes)
    }

    pub fn utc_time(ts: &DerTimestamp) -> DerNode {
        let s = format!(
            "{:02}{:02}{:02}{:02}{:02}{:02}Z",
            ts.year.rem_euclid(100),
            ts.month,
            ts.day,
            ts.hour,
            ts.minute,
            ts.second
        );
        Self::primitive(TagClass::Universal, tag::UTC_TIME, s.into_bytes())
    }

    pub fn generalized_time(ts: &DerTimestamp) -> DerNode {
        let s = format!(
            "{:04}{:02}{:02}{:02}{:02}{:02}Z",
            ts.year, ts.month, ts.day, ts.hour, ts.minute, ts.second
        );
        Self::primitive(TagClass::Universal, tag::GENERALIZED_TIME, s.into_bytes())
    }

    pub fn is_constructed(&self) -> bool {
        matches!(self.content, DerContent::Constructed(_))
    }

    pub fn is_universal(&self, number: u32) -> bool {
        self.tag_class == TagClass::Universal && self.tag_number == number
    }

    pub fn is_context(&self, number: u32) -> bool {
        self.tag_class == TagClass::ContextSpecific && self.tag_number == number
    }

    /// Child nodes of a constructed value.
    pub fn children(&self) -> Result<&[DerNode], DerError> {
        match &self.content {
            DerContent::Constructed(c) => Ok(c),
            DerContent::Primitive(_) => Err(DerError::UnexpectedTag {
                expected: "constructed value",
                found: self.tag_number,
            }),
        }
    }

    /// Content bytes of a primitive value.
    pub fn primitive_content(&self) -> Result<&[u8], DerError> {
        match &self.content {
            DerContent::Primitive(b) => Ok(b),
            DerContent::Constructed(_) => Err(DerError::UnexpectedTag {
                expected: "primitive value",
                found: self.tag_number,
            }),
        }
    }

    pub fn as_sequence(&self) -> Result<&[DerNode], DerError> {
        if !self.is_universal(tag::SEQUENCE) || !self.is_constructed() {
            return Err(DerError::UnexpectedTag { expected: "SEQUENCE", found: self.tag_number });
        }
        self.children()
    }

    pub fn as_set(&self) -> Result<&[DerNode], DerError> {
        if !self.is_universal(tag::SET) || !self.is_constructed() {
            return Err(DerError::UnexpectedTag { expected: "SET", found: self.tag_number });
        }
        self.children()
    }

    /// Signed arbitrary-precision integer value.
    pub fn as_integer(&self) -> Result<BigInt, DerError> {
        if !self.is_universal(tag::INTEGER) {
            return Err(DerError::UnexpectedTag { expected: "INTEGER", found: self.tag_number });
        }
        let content = self.primitive_content()?;
        if content.is_empty() {
            return Err(DerError::MalformedContent("INTEGER"));
        }
        Ok(BigInt::from_signed_bytes_be(content))
    }

    pub fn as_oid(&self) -> Result<Oid, DerError> {
        if !self.is_universal(tag::OBJECT_IDENTIFIER) {
            return Err(DerError::UnexpectedTag {
                expected: "OBJECT IDENTIFIER",
                found: self.tag_number,
            });
        }
        decode_oid(self.primitive_content()?)
    }

    pub fn as_boolean(&self) -> Result<bool, DerError> {
        if !self.is_universal(tag::BOOLEAN) {
            return Err(DerError::UnexpectedTag { expected: "BOOLEAN", found: self.tag_number });
        }
        let content = self.primitive_content()?;
        if content.len() != 1 {
            return Err(DerError::MalformedContent("BOOLEAN"));
        }
        Ok(content[0] != 0)
    }

    /// Bit string as (unused trailing bits, payload bytes).
    pub fn as_bit_string(&self) -> Result<(u8, &[u8]), DerError> {
        if !self.is_universal(tag::BIT_STRING) {
            return Err(DerError::UnexpectedTag { expected: "BIT STRING", found: self.tag_number });
        }
        let content = self.primitive_content()?;
        match content.split_first() {
            Some((&unused, rest)) if unused < 8 => Ok((unused, rest)),
            _ => Err(DerError::MalformedContent("BIT STRING")),
        }
    }

    pub fn as_octet_string(&self) -> Result<&[u8], DerError> {
        if !self.is_universal(tag::OCTET_STRING) {
            return Err(DerError::UnexpectedTag {
                expected: "OCTET STRING",
                found: self.tag_number,
            });
        }
        self.primitive_content()
    }

    pub fn content_len(&self) -> usize {
        match &self.content {
            DerContent::Primitive(b) => b.len(),
            DerContent::Constructed(c) => c.iter().map(DerNode::total_len).sum(),
        }
    }

    pub fn header_len(&self) -> usize {
        tag_encoded_len(self.tag_number) + length_encoded_len(self.content_len())
    }

    pub fn total_len(&self) -> usize {
        self.header_len() + self.content_len()
    }
}

fn tag_encoded_len(tag_number: u32) -> usize {
    if tag_number < 31 {
        1
    } else {
        1 + base128_len(u64::from(tag_number))
    }
}

fn length_encoded_len(content_len: usize) -> usize {
    if content_len < 128 {
        1
    } else {
        let mut n = content_len;
        let mut bytes = 0;
        while n > 0 {
            bytes += 1;
            n >>= 8;
        }
        1 + bytes
    }
}

fn base128_len(value: u64) -> usize {
    let mut n = value;
    let mut bytes = 1;
    while n >= 0x80 {
        bytes += 1;
        n >>= 7;
    }
    bytes
}

fn push_base128(out: &mut Vec<u8>, value: u64) {
    let mut shift = (base128_len(value) - 1) * 7;
    loop {
        let byte = ((value >> shift) & 0x7F) as u8;
        if shift == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
        shift -= 7;
    }
}

/// Parse the first complete TLV tree from `input`, returning the tree and
/// the number of bytes consumed.
pub fn parse_der(input: &[u8]) -> Result<(DerNode, usize), DerError> {
    if input.is_empty() {
        return Err(DerError::EmptyInput);
    }
    if input.len() > MAX_INPUT_LEN {
        return Err(DerError::InputTooLarge(input.len()));
    }
    parse_node(input, 0, 0)
}

/// Parse a TLV tree that must span the whole input.
pub fn parse_der_exact(input: &[u8]) -> Result<DerNode, DerError> {
    let (node, consumed) = parse_der(input)?;
    if consumed != input.len() {
        return Err(DerError::TrailingGarbage(input.len() - consumed));
    }
    Ok(node)
}

fn parse_node(input: &[u8], offset: usize, depth: usize) -> Result<(DerNode, usize), DerError> {
    if depth > MAX_DEPTH {
        return Err(DerError::DepthLimit);
    }
    let (tag_class, constructed, tag_number, mut pos) = parse_tag(input, offset)?;
    let (len, after_len) = parse_length(input, pos)?;
    pos = after_len;
    if len > input.len() - pos {
        return Err(DerError::TruncatedInput(offset));
    }
    let node = if constructed {
        let mut children = Vec::new();
        let mut inner = 0usize;
        while inner < len {
            let (child, used) = parse_node(&input[..pos + len], pos + inner, depth + 1)?;
            children.push(child);
            inner += used;
        }
        DerNode::constructed(tag_class, tag_number, children)
    } else {
        DerNode::primitive(tag_class, tag_number, input[pos..pos + len].to_vec())
    };
    Ok((node, pos + len - offset))
}

fn parse_tag(input: &[u8], offset: usize) -> Result<(TagClass, bool, u32, usize), DerError> {
    let first = *input.get(offset).ok_or(DerError::TruncatedInput(offset))?;
    let tag_class = TagClass::from_byte(first);
    let constructed = first & 0x20 != 0;
    let low = first & 0x1F;
    if low != 0x1F {
        return Ok((tag_class, constructed, u32::from(low), offset + 1));
    }
    // High tag number form: base-128, minimal, value must not fit the low form.
    let mut pos = offset + 1;
    let mut value: u64 = 0;
    loop {
        let byte = *input.get(pos).ok_or(DerError::TruncatedInput(offset))?;
        if pos == offset + 1 && byte == 0x80 {
            return Err(DerError::NonMinimalTag(offset));
        }
        value = (value << 7) | u64::from(byte & 0x7F);
        if value > u64::from(u32::MAX) {
            return Err(DerError::TagOverflow(offset));
        }
        pos += 1;
        if byte & 0x80 == 0 {
            break;
        }
    }
    if value < 31 {
        return Err(DerError::NonMinimalTag(offset));
    }
    Ok((tag_class, constructed, value as u32, pos))
}

fn parse_length(input: &[u8], offset: usize) -> Result<(usize, usize), DerError> {
    let first = *input.get(offset).ok_or(DerError::TruncatedInput(offset))?;
    if first < 0x80 {
        return Ok((usize::from(first), offset + 1));
    }
    if first == 0x80 {
        return Err(DerError::IndefiniteLength(offset));
    }
    let num_bytes = usize::from(first & 0x7F);
    if num_bytes > 8 {
        return Err(DerError::TruncatedInput(offset));
    }
    let mut value: u64 = 0;
    for i in 0..num_bytes {
        let byte = *input.get(offset + 1 + i).ok_or(DerError::TruncatedInput(offset))?;
        if i == 0 && byte == 0 {
            return Err(DerError::NonMinimalLength(offset));
        }
        value = (value << 8) | u64::from(byte);
    }
    if value < 0x80 {
        return Err(DerError::NonMinimalLength(offset));
    }
    let value = usize::try_from(value).map_err(|_| DerError::TruncatedInput(offset))?;
    Ok((value, offset + 1 + num_bytes))
}

/// Render a node back to DER bytes. For nodes produced by `parse_der` the
/// output is byte-identical to the original input.
pub fn encode_der(node: &DerNode) -> Vec<u8> {
    let mut out = Vec::with_capacity(node.total_len());
    encode_into(node, &mut out);
    out
}

fn encode_into(node: &DerNode, out: &mut Vec<u8>) {
    let constructed_bit = if node.is_constructed() { 0x20 } else { 0x00 };
    if node.tag_number < 31 {
        out.push(node.tag_class.bits() | constructed_bit | node.tag_number as u8);
    } else {
        out.push(node.tag_class.bits() | constructed_bit | 0x1F);
        push_base128(out, u64::from(node.tag_number));
    }
    let len = node.content_len();
    if len < 128 {
        out.push(len as u8);
    } else {
        let bytes = (len.ilog2() / 8 + 1) as usize;
        out.push(0x80 | bytes as u8);
        for i in (0..bytes).rev() {
            out.push((len >> (8 * i)) as u8);
        }
    }
    match &node.content {
        DerContent::Primitive(bytes) => out.extend_from_slice(bytes),
        DerContent::Constructed(children) => {
            for child in children {
                encode_into(child, out);
            }
        }
    }
}

/// True when the INTEGER content uses the minimal DER form.
pub fn integer_is_minimal(content: &[u8]) -> bool {
    match content {
        [] => false,
        [_] => true,
        [0x00, second, ..] => *second & 0x80 != 0,
        [0xFF, second, ..] => *second & 0x80 == 0,
        _ => true,
    }
}

/// An object identifier as its arc list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Oid {
    arcs: Vec<u64>,
}

impl Oid {
    pub fn new(arcs: Vec<u64>) -> Result<Oid, DerError> {
        if arcs.len() < 2 {
            return Err(DerError::InvalidOid("fewer than two arcs".into()));
        }
        if arcs[0] > 2 {
            return Err(DerError::InvalidOid(format!("first arc {} out of range", arcs[0])));
        }
        if arcs[0] < 2 && arcs[1] >= 40 {
            return Err(DerError::InvalidOid(format!(
                "second arc {} must be < 40 under first arc {}",
                arcs[1], arcs[0]
            )));
        }
        Ok(Oid { arcs })
    }

    /// Convenience constructor for known-valid arc literals.
    pub fn from_arcs(arcs: &[u64]) -> Oid {
        Oid::new(arcs.to_vec()).expect("static OID arcs must be valid")
    }

    pub fn parse_dotted(s: &str) -> Result<Oid, DerError> {
        let arcs = s
            .split('.')
            .map(|part| part.parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| DerError::InvalidOid(format!("not a dotted OID: {s:?}")))?;
        Oid::new(arcs)
    }

    pub fn arcs(&self) -> &[u64] {
        &self.arcs
    }

    pub fn dotted(&self) -> String {
        self.to_string()
    }

    /// DER content octets (the bytes inside the OBJECT IDENTIFIER TLV).
    pub fn to_der_content(&self) -> Vec<u8> {
        let mut out = Vec::new();
        push_base128(&mut out, self.arcs[0] * 40 + self.arcs[1]);
        for &arc in &self.arcs[2..] {
            push_base128(&mut out, arc);
        }
        out
    }
}

impl std::fmt::Display for Oid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for arc in &self.arcs {
            if !first {
                write!(f, ".")?;
            }
            write!(f, "{arc}")?;
            first = false;
        }
        Ok(())
    }
}

/// Decode OBJECT IDENTIFIER content octets.
pub fn decode_oid(content: &[u8]) -> Result<Oid, DerError> {
    if content.is_empty() {
        return Err(DerError::EmptyContent);
    }
    if content[content.len() - 1] & 0x80 != 0 {
        return Err(DerError::UnterminatedArc);
    }
    let mut arcs = Vec::new();
    let mut value: u64 = 0;
    let mut arc_start = true;
    for &byte in content {
        if arc_start && byte == 0x80 {
            return Err(DerError::NonMinimalArc);
        }
        if value > (u64::MAX >> 7) {
            return Err(DerError::ArcOverflow);
        }
        value = (value << 7) | u64::from(byte & 0x7F);
        arc_start = byte & 0x80 == 0;
        if arc_start {
            if arcs.is_empty() {
                // First subidentifier packs the first two arcs.
                if value < 80 {
                    arcs.push(value / 40);
                    arcs.push(value % 40);
                } else {
                    arcs.push(2);
                    arcs.push(value - 80);
                }
            } else {
                arcs.push(value);
            }
            value = 0;
        }
    }
    Ok(Oid { arcs })
}

/// The source encoding of a decoded timestamp.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeForm {
    UtcTime,
    GeneralizedTime,
}

/// A normalized UTC timestamp from a UTCTime or GeneralizedTime value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DerTimestamp {
    pub year: i32,
    pub month: u32,
    pub day: u32,
    pub hour: u32,
    pub minute: u32,
    pub second: u32,
    pub source_form: TimeForm,
}

impl DerTimestamp {
    pub fn new(
        year: i32,
        month: u32,
        day: u32,
        hour: u32,
        minute: u32,
        second: u32,
        source_form: TimeForm,
    ) -> Result<DerTimestamp, DerError> {
        let ts = DerTimestamp { year, month, day, hour, minute, second, source_form };
        ts.validate()?;
        Ok(ts)
    }

    fn validate(&self) -> Result<(), DerError> {
        if self.month < 1 || self.month > 12 {
            return Err(DerError::BadFormat(format!("month {} out of range", self.month)));
        }
        if self.day < 1 || self.day > days_in_month(self.year, self.month) {
            return Err(DerError::BadFormat(format!("day {} out of range", self.day)));
        }
        if self.hour > 23 || self.minute > 59 || self.second > 59 {
            return Err(DerError::BadFormat(format!(
                "time {:02}:{:02}:{:02} out of range",
                self.hour, self.minute, self.second
            )));
        }
        Ok(())
    }

    /// Days since 1970-01-01 of the calendar date part.
    pub fn epoch_days(&self) -> i64 {
        days_from_civil(self.year, self.month, self.day)
    }

    pub fn unix_seconds(&self) -> i64 {
        self.epoch_days() * 86_400
            + i64::from(self.hour) * 3_600
            + i64::from(self.minute) * 60
            + i64::from(self.second)
    }

    /// Days since epoch including the time-of-day fraction.
    pub fn epoch_days_f64(&self) -> f64 {
        self.unix_seconds() as f64 / 86_400.0
    }

    fn key(&self) -> (i32, u32, u32, u32, u32, u32) {
        (self.year, self.month, self.day, self.hour, self.minute, self.second)
    }
}

impl PartialOrd for DerTimestamp {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.key().cmp(&other.key()))
    }
}

impl std::fmt::Display for DerTimestamp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z",
            self.year, self.month, self.day, self.hour, self.minute, self.second
        )
    }
}

fn days_in_month(year: i32, month: u32) -> u32 {
    match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 if is_leap_year(year) => 29,
        2 => 28,
        _ => 0,
    }
}

fn is_leap_year(year: i32) -> bool {
    (year % 4 == 0 && year % 100 != 0) || year % 400 == 0
}

/// Days since 1970-01-01 for a proleptic Gregorian date.
pub fn days_from_civil(year: i32, month: u32, day: u32) -> i64 {
    let y = i64::from(year) - i64::from(month <= 2);
    let era = if y >= 0 { y } else { y - 399 } / 400;
    let yoe = y - era * 400;
    let mp = i64::from((month + 9) % 12);
    let doy = (153 * mp + 2) / 5 + i64::from(day) - 1;
    let doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    era * 146_097 + doe - 719_468
}

/// Inverse of [`days_from_civil`].
pub fn civil_from_days(days: i64) -> (i32, u32, u32) {
    let z = days + 719_468;
    let era = if z >= 0 { z } else { z - 146_096 } / 146_097;
    let doe = z - era * 146_097;
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let y = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let day = (doy - (153 * mp + 2) / 5 + 1) as u32;
    let month = if mp < 10 { mp + 3 } else { mp - 9 } as u32;
    ((y + i64::from(month <= 2)) as i32, month, day)
}

/// Decode a UTCTime or GeneralizedTime node to a normalized UTC timestamp.
///
/// DER requires the terminal 'Z' and full seconds; two-digit UTCTime years
/// map 00-49 to 2000-2049 and 50-99 to 1950-1999.
pub fn decode_time(node: &DerNode) -> Result<DerTimestamp, DerError> {
    let (form, digits) = match node.tag_number {
        tag::UTC_TIME if node.tag_class == TagClass::Universal => (TimeForm::UtcTime, 12),
        tag::GENERALIZED_TIME if node.tag_class == TagClass::Universal => {
            (TimeForm::GeneralizedTime, 14)
        }
        _ => {
            return Err(DerError::UnexpectedTag {
                expected: "UTCTime or GeneralizedTime",
                found: node.tag_number,
            })
        }
    };
    let content = node.primitive_content()?;
    let text = std::str::from_utf8(content)
        .map_err(|_| DerError::BadFormat("time value is not ASCII".into()))?;
    if text.len() != digits + 1 {
        return Err(DerError::BadFormat(format!(
            "expected {digits} digits plus 'Z', got {text:?}"
        )));
    }
    if !text.ends_with('Z') {
        return Err(DerError::BadFormat(format!("missing terminal 'Z' in {text:?}")));
    }
    let body = &text[..digits];
    if !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(DerError::BadFormat(format!("non-digit in time value {text:?}")));
    }
    let field = |range: std::ops::Range<usize>| body[range].parse::<u32>().unwrap();
    let (year, rest_at) = match form {
        TimeForm::UtcTime => {
            let yy = field(0..2);
            let year = if yy < 50 { 2000 + yy } else { 1900 + yy };
            (year as i32, 2)
        }
        TimeForm::GeneralizedTime => (field(0..4) as i32, 4),
    };
    DerTimestamp::new(
        year,
        field(rest_at..rest_at + 2),
        field(rest_at + 2..rest_at + 4),
        field(rest_at + 4..rest_at + 6),
        field(rest_at + 6..rest_at + 8),
        field(rest_at + 8..rest_at + 10),
        form,
    )
}
