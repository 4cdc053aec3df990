use log::{debug, info};
use serde_json::{json, Value};
use spinwreath_core::chartable::build_table;
use spinwreath_core::checks::{
    heisenberg_check, heisenberg_transport_check, hopf_adjoint_check, hopf_product_check, isometry_check, oracle_class_checks,
    oracle_table_check,
};
use spinwreath_core::gamma::identify_affine;
use spinwreath_core::oracle::{group_order, type_classes, ENUMERATION_GUARD};
use spinwreath_core::report::all_passed;
use spinwreath_core::{CheckReport, FockSpace, SpinAlgebra, TwistedSpace, VirtualChar};

use crate::config::{RunConfig, XiSpec};
use crate::error::CliError;
use crate::output::{big, Document};

pub const MAX_CLASSES_N: usize = 12;
pub const MAX_ORACLE_N: usize = 4;
pub const MAX_TABLE_N: usize = 8;
pub const MAX_DEGREE: usize = 16;
pub const MAX_WINDOW: i64 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Heisenberg,
    Isometry,
    Hopf,
    Clifford,
    Ope,
    Affine,
    Oracle,
}

/// Which normalization of the x-x relation the affine suite asserts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum XxForm {
    /// `8{h_i(n+n') + n δ C}` as stated.
    #[default]
    Literal,
    /// `8 h_i(n+n') + 4n δ C`, the form the operators satisfy.
    Corrected,
}

impl XxForm {
    fn coefficients(self) -> (i64, i64) {
        match self {
            XxForm::Literal => (8, 8),
            XxForm::Corrected => (8, 4),
        }
    }
}

fn bounded<T: PartialOrd + std::fmt::Display>(name: &str, v: T, max: T) -> Result<T, CliError> {
    if v > max {
        Err(CliError::Config(format!("{name} = {v} exceeds the guard {max}")))
    } else {
        Ok(v)
    }
}

fn n_within(cfg: &RunConfig, default: Option<usize>, max: usize) -> Result<usize, CliError> {
    let n = match (cfg.n, default) {
        (Some(n), _) | (None, Some(n)) => n,
        (None, None) => cfg.require_n()?,
    };
    bounded("n", n, max)
}

fn window_within(cfg: &RunConfig, default: i64) -> Result<i64, CliError> {
    let w = cfg.window.unwrap_or(default);
    if w < 0 {
        return Err(CliError::Config(format!("window must be non-negative, got {w}")));
    }
    bounded("window", w, MAX_WINDOW)
}

fn degree_within(cfg: &RunConfig, default: usize) -> Result<usize, CliError> {
    bounded("degree", cfg.degree.unwrap_or(default), MAX_DEGREE)
}

fn reports_document(kind: &str, reports: Vec<CheckReport>) -> (Document, bool) {
    let ok = all_passed(&reports);
    for r in &reports {
        info!("{} {:?} ({} instances)", r.relation, r.status, r.instances);
    }
    (Document::Reports(kind.to_string(), reports), ok)
}

pub fn cmd_classes(cfg: &RunConfig, oracle: bool) -> Result<(Document, bool), CliError> {
    let n = n_within(cfg, None, MAX_CLASSES_N)?;
    let g = cfg.gamma.data();
    let names: Vec<String> = g.classes.iter().map(|c| c.name.clone()).collect();
    let types = type_classes(g, n);
    let mut rows = Vec::new();
    let (mut even_pairs, mut odd_pairs) = (0, 0);
    for t in &types {
        let parity = t.signed_type.parity();
        if t.split {
            if parity == 0 {
                even_pairs += 1;
            } else {
                odd_pairs += 1;
            }
        }
        rows.push(json!({
            "rho": t.signed_type.plus.to_doc(&names),
            "rho_minus": t.signed_type.minus.to_doc(&names),
            "split": t.split,
            "parity": if parity == 0 { "even" } else { "odd" },
            "centralizer": big(&t.centralizer),
            "class_size": big(&t.class_size),
        }));
    }
    let mut doc = json!({
        "gamma": g.name,
        "n": n,
        "even_split_pairs": even_pairs,
        "odd_split_pairs": odd_pairs,
        "classes": rows,
    });
    let mut ok = true;
    if oracle {
        let b = cfg
            .gamma
            .builtin()
            .ok_or_else(|| CliError::Config("--oracle needs a built-in group with explicit elements".into()))?;
        bounded("n", n, MAX_ORACLE_N)?;
        let order = group_order(b, n);
        if order > ENUMERATION_GUARD {
            return Err(CliError::Config(format!("group order {order} exceeds the enumeration guard {ENUMERATION_GUARD}")));
        }
        let reports = oracle_class_checks(b, n);
        ok = all_passed(&reports);
        doc["oracle"] = json!({"status": if ok { "OK" } else { "MISMATCH" }, "reports": reports});
    }
    Ok((Document::Classes(doc), ok))
}

pub fn cmd_chartable(cfg: &RunConfig, check: bool) -> Result<Document, CliError> {
    let n = n_within(cfg, None, MAX_TABLE_N)?;
    if let Some(xi) = &cfg.xi {
        if *xi != XiSpec::Standard {
            return Err(CliError::Config("character tables use the standard form; drop --xi".into()));
        }
    }
    let table = build_table(cfg.gamma.data(), n, check)?;
    debug!("table with {} rows", table.rows.len());
    Ok(Document::Table(Box::new(table)))
}

pub fn cmd_verify(cfg: &RunConfig, suite: Suite, xx: XxForm) -> Result<(Document, bool), CliError> {
    let g = cfg.gamma.data();
    let k = g.num_classes();
    let xi_spec = cfg.xi.clone();
    let xi_or = |default: XiSpec| -> Result<VirtualChar, CliError> { xi_spec.clone().unwrap_or(default).resolve(g) };
    let reports = match suite {
        Suite::Heisenberg => {
            let xi = xi_or(XiSpec::Standard)?;
            let space = FockSpace::new(g, &xi)?;
            let window = window_within(cfg, 5)?;
            vec![heisenberg_check(&space, window.max(1) as u32, degree_within(cfg, 8)?)]
        }
        Suite::Isometry => {
            let xi = xi_or(XiSpec::Standard)?;
            let alg = SpinAlgebra::new(g.clone());
            let n = n_within(cfg, Some(4), MAX_TABLE_N)?;
            vec![isometry_check(&alg, &xi, n), heisenberg_transport_check(&alg, &xi, n)]
        }
        Suite::Hopf => {
            let alg = SpinAlgebra::new(g.clone());
            let n = n_within(cfg, Some(4), MAX_TABLE_N)?;
            vec![hopf_product_check(&alg, n), hopf_adjoint_check(&alg, n)]
        }
        Suite::Clifford => {
            let xi = xi_or(XiSpec::Standard)?;
            if xi != VirtualChar::standard(k) {
                return Err(CliError::Config("the Clifford relations are stated for the standard form only".into()));
            }
            let space = TwistedSpace::new(g.clone(), xi)?;
            space.clifford_check(window_within(cfg, 3)?, degree_within(cfg, 6)?)
        }
        Suite::Ope => {
            let xi = xi_or(XiSpec::Standard)?;
            let space = TwistedSpace::new(g.clone(), xi)?;
            let (window, degree) = (window_within(cfg, 2)?, degree_within(cfg, 4)?);
            let r = space.rank();
            let mut out = Vec::new();
            for i in 0..r {
                let a = space.unit(i);
                let params = json!({"gamma": g.name, "alpha": a, "window": window, "degree": degree});
                out.push(CheckReport::from_result("X_n(-a) = (-1)^n X_n(a) eps", params, space.x_parity_check(&a, window, degree)));
                for j in 0..r {
                    let b = space.unit(j);
                    let params = json!({"gamma": g.name, "alpha": a, "beta": b, "window": window, "degree": degree});
                    out.push(CheckReport::from_result("X(a,z) X(b,w) operator product", params.clone(), space.ope_check(&a, &b, window, degree)));
                    out.push(CheckReport::from_result(
                        "[h_m(a), X_n(b)]",
                        params,
                        space.prim_commutator_check(&a, &b, window, degree),
                    ));
                }
            }
            out
        }
        Suite::Affine => {
            let xi = match &xi_spec {
                None | Some(XiSpec::Mckay(_)) => xi_or(XiSpec::Mckay(None))?,
                Some(_) => return Err(CliError::Config("the affine relations need the McKay form; use --xi mckay".into())),
            };
            let space = TwistedSpace::new(g.clone(), xi)?;
            let (window, degree) = (window_within(cfg, 3)?, degree_within(cfg, 8)?);
            let mut sets = vec![(0..k).collect::<Vec<_>>()];
            if k > 1 {
                sets.push((1..k).collect());
            }
            space.affine_relation_checks(&sets, window, degree, xx.coefficients()).concat()
        }
        Suite::Oracle => {
            let b = cfg
                .gamma
                .builtin()
                .ok_or_else(|| CliError::Config("the oracle needs a built-in group with explicit elements".into()))?;
            let n = n_within(cfg, None, MAX_ORACLE_N)?;
            let order = group_order(b, n);
            if order > ENUMERATION_GUARD {
                return Err(CliError::Config(format!("group order {order} exceeds the enumeration guard {ENUMERATION_GUARD}")));
            }
            let mut out = oracle_class_checks(b, n);
            out.push(oracle_table_check(b, n));
            out
        }
    };
    Ok(reports_document(&format!("{suite:?}").to_lowercase(), reports))
}

pub fn cmd_mckay(cfg: &RunConfig) -> Result<(Document, bool), CliError> {
    let g = cfg.gamma.data();
    let xi = match &cfg.xi {
        None => XiSpec::Mckay(None).resolve(g)?,
        Some(spec @ XiSpec::Mckay(_)) => spec.resolve(g)?,
        Some(_) => return Err(CliError::Config("mckay takes --xi mckay or mckay:<char>".into())),
    };
    let cartan = g.cartan_matrix(&xi)?;
    let ty = identify_affine(&cartan);
    let doc: Value = json!({
        "gamma": g.name,
        "xi": xi.coeffs,
        "characters": g.char_names,
        "cartan": cartan,
        "affine_type": ty.map(|t| t.to_string()),
    });
    Ok((Document::Mckay(doc), ty.is_some()))
}
