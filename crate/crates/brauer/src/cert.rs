//! Certificates: line-oriented, self-contained records of a construction
//! and the identities that justify it. A certificate can be replayed by
//! evaluation alone (see the oracle module) and carries a digest over its
//! own body, so any byte-level tampering is detected before replay.
//!
//! Layout:
//!   brauer-certificate v1
//!   claim: <kind>
//!   <body lines: key: value pairs and check transcript lines>
//!   digest: sha256:<hex over every preceding line>

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const HEADER: &str = "brauer-certificate v1";

/// What a certificate asserts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimKind {
    NonzeroPoint,
    DensePoint,
    NormalForm,
    ClosureBound,
}

impl ClaimKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ClaimKind::NonzeroPoint => "nonzero-point",
            ClaimKind::DensePoint => "dense-point",
            ClaimKind::NormalForm => "normal-form",
            ClaimKind::ClosureBound => "closure-bound",
        }
    }

    pub fn from_str(s: &str) -> Result<ClaimKind> {
        match s {
            "nonzero-point" => Ok(ClaimKind::NonzeroPoint),
            "dense-point" => Ok(ClaimKind::DensePoint),
            "normal-form" => Ok(ClaimKind::NormalForm),
            "closure-bound" => Ok(ClaimKind::ClosureBound),
            _ => Err(Error::MalformedCertificate(format!("unknown claim kind `{s}`"))),
        }
    }
}

/// A parsed or freshly built certificate: claim plus ordered body lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub claim: ClaimKind,
    pub body: Vec<String>,
}

fn digest_hex(lines: &[String]) -> String {
    let mut h = Sha256::new();
    for l in lines {
        h.update(l.as_bytes());
        h.update(b"\n");
    }
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

impl Certificate {
    /// Serialize, appending the digest line.
    pub fn to_text(&self) -> String {
        let mut lines = vec![HEADER.to_string(), format!("claim: {}", self.claim.as_str())];
        lines.extend(self.body.iter().cloned());
        let d = digest_hex(&lines);
        lines.push(format!("digest: sha256:{d}"));
        lines.join("\n") + "\n"
    }

    /// Parse and check structure plus digest integrity. Semantic replay
    /// lives in the oracle module.
    pub fn parse(text: &str) -> Result<Certificate> {
        let lines: Vec<&str> = text.lines().collect();
        if lines.len() < 3 {
            return Err(Error::MalformedCertificate("too short".into()));
        }
        if lines[0] != HEADER {
            return Err(Error::MalformedCertificate(format!("bad header `{}`", lines[0])));
        }
        let claim_str = lines[1]
            .strip_prefix("claim: ")
            .ok_or_else(|| Error::MalformedCertificate("missing claim line".into()))?;
        let claim = ClaimKind::from_str(claim_str)?;
        let last = lines[lines.len() - 1];
        let hex = last
            .strip_prefix("digest: sha256:")
            .ok_or_else(|| Error::MalformedCertificate("missing digest line".into()))?;
        let prefix: Vec<String> = lines[..lines.len() - 1].iter().map(|s| s.to_string()).collect();
        if digest_hex(&prefix) != hex {
            return Err(Error::MalformedCertificate("digest mismatch: certificate was altered".into()));
        }
        let body = prefix[2..].to_vec();
        Ok(Certificate { claim, body })
    }

    /// Values of every body line with the given key, in order.
    pub fn values(&self, key: &str) -> Vec<&str> {
        let pref = format!("{key}: ");
        self.body
            .iter()
            .filter_map(|l| l.strip_prefix(pref.as_str()))
            .collect()
    }

    /// The unique value of a required key.
    pub fn value(&self, key: &str) -> Result<&str> {
        let vs = self.values(key);
        match vs.as_slice() {
            [v] => Ok(v),
            [] => Err(Error::MalformedCertificate(format!("missing `{key}` line"))),
            _ => Err(Error::MalformedCertificate(format!("duplicate `{key}` line"))),
        }
    }
}

/// Accumulates certificate body lines during a construction.
#[derive(Debug)]
pub struct CertBuilder {
    claim: ClaimKind,
    body: Vec<String>,
}

impl CertBuilder {
    pub fn new(claim: ClaimKind) -> CertBuilder {
        CertBuilder { claim, body: Vec::new() }
    }

    pub fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        self.body.push(format!("{key}: {value}"));
    }

    /// Record one verified identity in the transcript. The caller must
    /// only record checks that actually passed; the replay recomputes
    /// them and fails on any divergence.
    pub fn check(&mut self, name: impl std::fmt::Display) {
        self.body.push(format!("check: {name} ok"));
    }

    pub fn finish(self) -> Certificate {
        Certificate { claim: self.claim, body: self.body }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_tamper() {
        let mut b = CertBuilder::new(ClaimKind::NonzeroPoint);
        b.kv("field", "GF(3)");
        b.kv("point", "([1], [1], [1])");
        b.check("vanish f1 at point");
        let cert = b.finish();
        let text = cert.to_text();
        let back = Certificate::parse(&text).unwrap();
        assert_eq!(back, cert);
        assert_eq!(back.value("field").unwrap(), "GF(3)");
        // flip one byte of witness data
        let tampered = text.replace("([1], [1], [1])", "([1], [1], [2])");
        assert!(matches!(Certificate::parse(&tampered), Err(Error::MalformedCertificate(_))));
        // truncated
        assert!(Certificate::parse(HEADER).is_err());
        // unknown claim
        let bad = text.replace("nonzero-point", "mystery");
        assert!(Certificate::parse(&bad).is_err());
    }
}
