//! Browser bindings: polygamma values and reductions, non-vanishing
//! certificates, and coprime-point ranks.
//!
//! The `*_text` functions are plain Rust so they can be tested natively; the
//! exported wrappers only convert errors into JS exceptions.

use num_rational::BigRational;
use wasm_bindgen::prelude::*;

use critstrip::certificates::{certify_gld, certify_modular, coprime_rank_certificate, CertConfig, ModularBranch};
use critstrip::lfamilies::{CriticalPoint, ExactComplex, FamilyDatum};
use critstrip::precision::{parse_rational, polygamma, PolygammaOrder, Precision};
use critstrip::symbolic::reduce_psi;

const DIGITS: usize = 25;

fn prec(bits: u32) -> Result<Precision, String> {
    Precision::new(bits as usize).map_err(|e| e.to_string())
}

fn rational(name: &str, s: &str) -> Result<BigRational, String> {
    parse_rational(s).ok_or_else(|| format!("{name}: `{s}` is not a rational number"))
}

/// ψ^(m)(z) to 25 digits, plus the exact reduction when `z` is rational.
pub fn psi_text(m: u32, z: &str, bits: u32) -> Result<String, String> {
    let p = prec(bits)?;
    let zc: ExactComplex = z.parse().map_err(|_| format!("cannot parse `{z}`"))?;
    let v = polygamma(PolygammaOrder::new(m), &zc.to_complex(p)).map_err(|e| e.to_string())?;
    let mut out = format!("psi[{m}]({z}) = {}", v.to_decimal(DIGITS));
    if zc.is_real() {
        let e = reduce_psi(m, &zc.re).map_err(|e| e.to_string())?;
        out += &format!("\n          = {e}");
    }
    Ok(out)
}

/// Certificate record for GL(1) with κ = 1/2 (`family = "gld"`) or for a
/// modular form of weight `k` twisted by `D` (`family = "modular"`).
pub fn certify_text(family: &str, level: u64, disc: i64, k: &str, s0: &str, bits: u32) -> Result<String, String> {
    let cfg = CertConfig::new(prec(bits)?);
    let c = match family {
        "gld" => {
            let kappa = vec![ExactComplex::real(rational("kappa", "1/2")?)];
            let fd = FamilyDatum::AutomorphicGLd { conductor: level, kappa };
            let s0 = CriticalPoint::parse(s0, cfg.precision).map_err(|e| e.to_string())?;
            certify_gld(&fd, &s0, &cfg)
        }
        "modular" => {
            let fd = FamilyDatum::ModularTwisted { k: rational("k", k)?, level, disc };
            certify_modular(&fd, &rational("s0", s0)?, ModularBranch::Primary, &cfg)
        }
        other => return Err(format!("unknown family `{other}`")),
    };
    c.map(|c| c.to_text()).map_err(|e| e.to_string())
}

/// Rank certificate for the closed forms at the points a/q, gcd(a, q) = 1.
pub fn rank_text(q: u64, k: u32, bits: u32) -> Result<String, String> {
    let cfg = CertConfig::new(prec(bits)?);
    let fd = FamilyDatum::ModularTwisted { k: rational("k", &k.to_string())?, level: 1, disc: 1 };
    coprime_rank_certificate(&fd, q, &cfg).map(|c| c.to_text()).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn psi(m: u32, z: &str, bits: u32) -> Result<String, JsValue> {
    psi_text(m, z, bits).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn certify(family: &str, level: u64, disc: i64, k: &str, s0: &str, bits: u32) -> Result<String, JsValue> {
    certify_text(family, level, disc, k, s0, bits).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn rank(q: u64, k: u32, bits: u32) -> Result<String, JsValue> {
    rank_text(q, k, bits).map_err(|e| JsValue::from_str(&e))
}
