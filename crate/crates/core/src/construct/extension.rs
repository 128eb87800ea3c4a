//! Combining certificates for a normal subgroup N and the quotient G/N
//! into a certificate for G.

use std::collections::{BTreeMap, HashMap};

use super::{ball_set, checked, interval_cover_z, scale_of, subgroup_interval_certificate, ConstructError};
use crate::coarse::GapSet;
use crate::cover::{cell_diameter, k_disjoint_check, Cell, Certificate, Cover};
use crate::group::{GroupElement, GroupHom, GroupModel, Subgroup, Window};
use crate::rational::{fmt_rat, rat, Rat};

/// A short exact sequence N → G → Q with a set-theoretic section on a
/// window of Q.
#[derive(Clone, Debug)]
pub struct ExtensionData {
    pub total: GroupModel,
    pub kernel: Subgroup,
    pub quotient_hom: GroupHom,
    pub section: BTreeMap<GroupElement, GroupElement>,
}

/// What the kernel certificate has to satisfy for a given quotient
/// certificate and scale.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelRequirement {
    /// Image of the scale in the quotient.
    pub quotient_scale: GapSet,
    /// Least ρ with U⁻¹U ⊆ B(ρ)·N for every pulled-back cell U.
    pub thickening_radius: Rat,
    /// K′ = B(ρ).
    pub thickening: GapSet,
    /// K′·K·K′⁻¹ ∩ N.
    pub kernel_scale: GapSet,
    /// The kernel certificate must cover N ∩ B(this radius).
    pub kernel_window_radius: Rat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionReport {
    pub requirement: KernelRequirement,
    pub pulled_back_cells: usize,
    pub quotient_colors: usize,
    pub kernel_colors: usize,
}

impl ExtensionData {
    /// Checks π∘section = id on the section table and that kernel elements
    /// of `window` map to the identity.
    pub fn new(
        total: GroupModel,
        kernel: Subgroup,
        quotient_hom: GroupHom,
        section: BTreeMap<GroupElement, GroupElement>,
        window: &Window,
    ) -> Result<Self, ConstructError> {
        if quotient_hom.source() != &total {
            return Err(ConstructError::Precondition("quotient map does not start at the total group".into()));
        }
        for (q, g) in &section {
            if quotient_hom.evaluate(g)? != *q {
                return Err(ConstructError::Precondition(format!("section sends {q} to {g}, which maps elsewhere")));
            }
        }
        let q_model = quotient_hom.target();
        for x in window.elements() {
            if kernel.contains(&total, x)? && !q_model.is_identity(&quotient_hom.evaluate(x)?) {
                return Err(ConstructError::Precondition(format!("kernel element {x} has nontrivial image")));
            }
        }
        Ok(ExtensionData { total, kernel, quotient_hom, section })
    }

    pub fn quotient(&self) -> &GroupModel {
        self.quotient_hom.target()
    }

    /// Pulls back the quotient cells to the window: U = π⁻¹(cell) ∩ W.
    fn pull_back(&self, cert_q: &Certificate, window: &Window) -> Result<Vec<Cell>, ConstructError> {
        let mut idx: HashMap<&GroupElement, Vec<usize>> = HashMap::new();
        for (i, c) in cert_q.cover.cells().iter().enumerate() {
            for q in &c.members {
                idx.entry(q).or_default().push(i);
            }
        }
        let mut cells: Vec<Cell> =
            cert_q.cover.cells().iter().map(|c| Cell { color: c.color, members: GapSet::new() }).collect();
        for x in window.elements() {
            let q = self.quotient_hom.evaluate(x)?;
            let hits = idx.get(&q).ok_or_else(|| {
                ConstructError::Precondition(format!("quotient certificate does not cover {q}, the image of {x}"))
            })?;
            for &i in hits {
                cells[i].members.insert(x.clone());
            }
        }
        Ok(cells)
    }

    /// Computes the kernel-side requirements for a quotient certificate at
    /// scale K on the window B(window_r).
    pub fn kernel_requirement(
        &self,
        cert_q: &Certificate,
        k: &GapSet,
        window_r: Rat,
    ) -> Result<KernelRequirement, ConstructError> {
        let g = &self.total;
        let window = g.ball(window_r)?;
        let mut quotient_scale = GapSet::new();
        for x in k {
            quotient_scale.insert(self.quotient_hom.evaluate(x)?);
        }
        // Distance from the kernel is the norm induced on the quotient.
        let induced = GroupModel::image(self.quotient_hom.clone())?;
        let mut rho = Rat::from_integer(0);
        for cell in self.pull_back(cert_q, &window)? {
            let image: GapSet =
                cell.members.iter().map(|x| self.quotient_hom.evaluate(x)).collect::<Result<_, _>>()?;
            if !image.is_empty() {
                rho = rho.max(cell_diameter(&induced, &image)?);
            }
        }
        let thickening = ball_set(g, rho)?;
        let mut kernel_scale = GapSet::new();
        let left = thickening.product(g, k)?;
        for a in &left {
            for b in &thickening {
                let x = g.multiply(a, &g.invert(b)?)?;
                if self.kernel.contains(g, &x)? {
                    kernel_scale.insert(x);
                }
            }
        }
        Ok(KernelRequirement {
            quotient_scale,
            thickening_radius: rho,
            thickening,
            kernel_scale,
            kernel_window_radius: window_r + window_r + rho,
        })
    }
}

/// Builds cells (g_U·V·K′) ∩ U for every pulled-back quotient cell U and
/// kernel cell V, colored by the pair of colors, where g_U is the least
/// element of U. Checks every precondition before combining.
pub fn extension_combine(
    ext: &ExtensionData,
    cert_q: &Certificate,
    cert_n: &Certificate,
    k: &GapSet,
    window_r: Rat,
) -> Result<(Certificate, ExtensionReport), ConstructError> {
    let g = &ext.total;
    let window = g.ball(window_r)?;
    let req = ext.kernel_requirement(cert_q, k, window_r)?;

    let dq = k_disjoint_check(ext.quotient(), &cert_q.cover, &req.quotient_scale)?;
    if !dq.pass {
        return Err(ConstructError::Precondition(format!(
            "quotient cells {:?} are not disjoint at the image of K (witness {})",
            dq.cells.unwrap_or((0, 0)),
            dq.witness.map_or_else(|| "-".into(), |w| w.to_string())
        )));
    }
    for c in cert_n.cover.cells() {
        for x in &c.members {
            if !ext.kernel.contains(g, x)? {
                return Err(ConstructError::Precondition(format!("kernel certificate contains {x} outside N")));
            }
        }
    }
    let dn = k_disjoint_check(g, &cert_n.cover, &req.kernel_scale)?;
    if !dn.pass {
        return Err(ConstructError::Precondition(format!(
            "kernel cells {:?} are not K'K(K')⁻¹-disjoint (witness {})",
            dn.cells.unwrap_or((0, 0)),
            dn.witness.map_or_else(|| "-".into(), |w| w.to_string())
        )));
    }

    let mut v_idx: HashMap<&GroupElement, Vec<usize>> = HashMap::new();
    for (j, c) in cert_n.cover.cells().iter().enumerate() {
        for x in &c.members {
            v_idx.entry(x).or_default().push(j);
        }
    }
    let k_prime_inv = req.thickening.inverse(g)?;
    let kernel_colors = cert_n.colors;
    let pulled = ext.pull_back(cert_q, &window)?;
    let mut combined: BTreeMap<(usize, usize), Cell> = BTreeMap::new();
    let mut pulled_back_cells = 0;
    for (u_i, u) in pulled.iter().enumerate() {
        let Some(g_u) = u.members.iter().next() else { continue };
        pulled_back_cells += 1;
        let g_u_inv = g.invert(g_u)?;
        for x in &u.members {
            let lead = g.multiply(&g_u_inv, x)?;
            let mut placed = false;
            for kp in &k_prime_inv {
                let n = g.multiply(&lead, kp)?;
                for &v_j in v_idx.get(&n).map(Vec::as_slice).unwrap_or(&[]) {
                    let color = u.color * kernel_colors + cert_n.cover.cells()[v_j].color;
                    combined
                        .entry((u_i, v_j))
                        .or_insert_with(|| Cell { color, members: GapSet::new() })
                        .members
                        .insert(x.clone());
                    placed = true;
                }
            }
            if !placed {
                return Err(ConstructError::Precondition(format!(
                    "kernel certificate misses {g_u}⁻¹·{x}·K′⁻¹ ∩ N; it must cover N ∩ B({})",
                    fmt_rat(&req.kernel_window_radius)
                )));
            }
        }
    }
    let cert = Certificate {
        scale: k.clone(),
        colors: cert_q.colors * kernel_colors,
        cover: Cover::new(window, combined.into_values().collect())?,
        uniform_bound_radius: req.thickening_radius + req.thickening_radius + cert_n.uniform_bound_radius,
        report: None,
    };
    let cert = checked(g, cert, "extension certificate")?;
    let report = ExtensionReport {
        requirement: req,
        pulled_back_cells,
        quotient_colors: cert_q.colors,
        kernel_colors,
    };
    Ok((cert, report))
}

/// Everything produced by the ℤ² = ℤ × ℤ extension run.
#[derive(Clone, Debug)]
pub struct ExtensionRun {
    pub data: ExtensionData,
    pub quotient_certificate: Certificate,
    pub kernel_certificate: Certificate,
    pub certificate: Certificate,
    pub report: ExtensionReport,
}

/// ℤ² as an extension of ℤ (second coordinate) by ℤ × {0}, with interval
/// certificates on both sides, at scale ball(scale_r).
pub fn z2_extension_demo(scale_r: i64, window_r: i64) -> Result<ExtensionRun, ConstructError> {
    let g = GroupModel::free_abelian(2);
    let z = GroupModel::integers();
    let pi = GroupHom::parse(g.clone(), z.clone(), &["0", "1"])?;
    let axis = GroupElement::vector([1, 0]);
    let kernel = Subgroup::generated_by([axis.clone()]);
    let section = (-window_r..=window_r).map(|t| (GroupElement::vector([t]), GroupElement::vector([0, t]))).collect();
    let window = g.ball(rat(window_r))?;
    let data = ExtensionData::new(g.clone(), kernel.clone(), pi, section, &window)?;

    let k = ball_set(&g, rat(scale_r))?;
    let reach = scale_of(&z, &data.quotient_image(&k)?)?.to_integer().max(1);
    let quotient_certificate = interval_cover_z(reach, window_r.max(4 * reach))?;
    let req = data.kernel_requirement(&quotient_certificate, &k, rat(window_r))?;
    let n_window = g.ball(req.kernel_window_radius)?.filter(|x| kernel.contains(&g, x).unwrap_or(false));
    let kernel_certificate = subgroup_interval_certificate(&g, &axis, &req.kernel_scale, &n_window)?;
    let (certificate, report) =
        extension_combine(&data, &quotient_certificate, &kernel_certificate, &k, rat(window_r))?;
    Ok(ExtensionRun { data, quotient_certificate, kernel_certificate, certificate, report })
}

impl ExtensionData {
    /// π(K).
    pub fn quotient_image(&self, k: &GapSet) -> Result<GapSet, ConstructError> {
        Ok(k.iter().map(|x| self.quotient_hom.evaluate(x)).collect::<Result<_, _>>()?)
    }
}
