//! Canonical JSON encoding.
//!
//! Every writer here is byte-stable: fixed key order, floats printed with
//! 17 significant digits (`{:.16e}`), no whitespace variation. Identical
//! values always serialize to identical bytes, which is what the
//! reproducibility contract of reports and certificates rests on.

use alloc::string::String;
use alloc::vec::Vec;

use crate::choiduality::{KrausCertificate, MapModel};
use crate::hahnbanach::{
    ExtendStatus, ExtensionCertificate, SepStatus, SeparationCertificate, TranscriptEntry,
    VerifyReport, VerifySeparationReport,
};
use crate::matcore::{BlockElement, CMatrix, C64};
use crate::ordspace::SpaceModel;

/// 17 significant digits; round-trips through any IEEE-754 reader.
pub fn fmt_f64(x: f64) -> String {
    alloc::format!("{x:.16e}")
}

pub fn fmt_u64_hex(x: u64) -> String {
    alloc::format!("{x:016x}")
}

pub fn escape_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&alloc::format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

pub fn complex_json(z: C64) -> String {
    alloc::format!("{{\"re\":{},\"im\":{}}}", fmt_f64(z.re), fmt_f64(z.im))
}

fn grid_json(m: &CMatrix, pick: impl Fn(C64) -> f64) -> String {
    let mut out = String::from("[");
    for i in 0..m.rows() {
        if i > 0 {
            out.push(',');
        }
        out.push('[');
        for j in 0..m.cols() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&fmt_f64(pick(m.at(i, j))));
        }
        out.push(']');
    }
    out.push(']');
    out
}

pub fn matrix_json(m: &CMatrix) -> String {
    alloc::format!(
        "{{\"rows\":{},\"cols\":{},\"re\":{},\"im\":{}}}",
        m.rows(),
        m.cols(),
        grid_json(m, |z| z.re),
        grid_json(m, |z| z.im)
    )
}

pub fn block_json(b: &BlockElement) -> String {
    alloc::format!(
        "{{\"outer\":{},\"inner\":{},\"rows\":{},\"cols\":{},\"re\":{},\"im\":{}}}",
        b.outer(),
        b.inner(),
        b.mat().rows(),
        b.mat().cols(),
        grid_json(b.mat(), |z| z.re),
        grid_json(b.mat(), |z| z.im)
    )
}

pub fn matrix_list_json(ms: &[CMatrix]) -> String {
    let items: Vec<String> = ms.iter().map(matrix_json).collect();
    alloc::format!("[{}]", items.join(","))
}

pub fn space_json(s: &SpaceModel) -> String {
    alloc::format!(
        "{{\"ambient_dim\":{},\"basis\":{},\"star_closed\":{}}}",
        s.ambient_dim(),
        matrix_list_json(s.basis()),
        s.star_closed()
    )
}

pub fn map_json(m: &MapModel) -> String {
    alloc::format!(
        "{{\"dom\":{},\"cod_level\":{},\"coeffs\":{}}}",
        space_json(m.dom()),
        m.cod_level(),
        matrix_list_json(m.coeffs())
    )
}

pub fn kraus_json(c: &KrausCertificate) -> String {
    alloc::format!(
        "{{\"gammas\":{},\"residual\":{}}}",
        matrix_list_json(&c.gammas),
        fmt_f64(c.residual)
    )
}

fn transcript_json(t: &[TranscriptEntry]) -> String {
    let items: Vec<String> = t
        .iter()
        .map(|e| {
            alloc::format!(
                "{{\"kind\":\"{}\",\"level\":{},\"digest\":\"{}\",\"margin\":{}}}",
                e.kind,
                e.level,
                fmt_u64_hex(e.digest),
                fmt_f64(e.margin)
            )
        })
        .collect();
    alloc::format!("[{}]", items.join(","))
}

fn usize_list_json(v: &[usize]) -> String {
    let items: Vec<String> = v.iter().map(|x| alloc::format!("{x}")).collect();
    alloc::format!("[{}]", items.join(","))
}

pub fn extend_status_str(s: ExtendStatus) -> &'static str {
    match s {
        ExtendStatus::Valid => "VALID",
        ExtendStatus::BudgetExceeded => "BUDGET_EXCEEDED",
    }
}

pub fn sep_status_str(s: SepStatus) -> &'static str {
    match s {
        SepStatus::Valid => "VALID",
        SepStatus::NotSeparated => "NOT_SEPARATED",
    }
}

pub fn extension_json(c: &ExtensionCertificate) -> String {
    let exact = match c.exact_choi_margin {
        Some(m) => fmt_f64(m),
        None => String::from("null"),
    };
    alloc::format!(
        "{{\"kind\":\"extension\",\"status\":\"{}\",\"psi\":{},\"levels_checked\":{},\"cp_margin\":{},\"gauge_margin\":{},\"exact_choi_margin\":{},\"seed\":{},\"rounds_used\":{},\"transcript\":{}}}",
        extend_status_str(c.status),
        map_json(&c.psi),
        usize_list_json(&c.levels_checked),
        fmt_f64(c.cp_margin),
        fmt_f64(c.gauge_margin),
        exact,
        c.seed,
        c.rounds_used,
        transcript_json(&c.transcript)
    )
}

pub fn separation_json(c: &SeparationCertificate) -> String {
    alloc::format!(
        "{{\"kind\":\"separation\",\"status\":\"{}\",\"phi\":{},\"levels_checked\":{},\"set_margin\":{},\"point_margin\":{},\"seed\":{},\"rounds_used\":{},\"transcript\":{}}}",
        sep_status_str(c.status),
        map_json(&c.phi),
        usize_list_json(&c.levels_checked),
        fmt_f64(c.set_margin),
        fmt_f64(c.point_margin),
        c.seed,
        c.rounds_used,
        transcript_json(&c.transcript)
    )
}

pub fn verify_json(r: &VerifyReport) -> String {
    let exact = match r.exact_choi_margin {
        Some(m) => fmt_f64(m),
        None => String::from("null"),
    };
    alloc::format!(
        "{{\"kind\":\"verify-extension\",\"valid\":{},\"cp_margin\":{},\"gauge_margin\":{},\"exact_choi_margin\":{}}}",
        r.valid,
        fmt_f64(r.cp_margin),
        fmt_f64(r.gauge_margin),
        exact
    )
}

pub fn verify_separation_json(r: &VerifySeparationReport) -> String {
    alloc::format!(
        "{{\"kind\":\"verify-separation\",\"valid\":{},\"set_margin\":{},\"point_margin\":{}}}",
        r.valid,
        fmt_f64(r.set_margin),
        fmt_f64(r.point_margin)
    )
}
