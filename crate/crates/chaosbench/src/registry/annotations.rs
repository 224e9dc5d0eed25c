//! Precomputed annotation table, measured with the characterization module
//! (10 replicates, 30+ periods, 500 points per period for the spectra;
//! dimension and entropy protocols as in `characterize::annotate`) and
//! recorded here as data.

use super::SystemAnnotations;

pub fn baked(name: &str) -> Option<SystemAnnotations> {
    let (spectrum, corr_dim, mse): (&[f64], f64, f64) = match name {
        "Aizawa" => (
            &[0.056089152552315065, -4.10330386502698e-13, -0.3048753368572025],
            2.1274322459874355,
            0.36476285294132443,
        ),
        "Chen" => (
            &[2.0078200618018323, -0.00035099785164786, -12.00746907598315],
            2.2454184688459393,
            0.2844085699966329,
        ),
        "Dadras" => (
            &[0.36653241402139414, -0.00037953646181030715, -10.66612158568561],
            1.9287469597127411,
            0.33400700073017886,
        ),
        "DrivenPendulum" => (
            &[0.14061071968083483, -0.6406107181661806],
            1.7460237387241164,
            0.30286067646479337,
        ),
        "Duffing" => (
            &[0.1081958488055342, -0.3581958476986131],
            1.8535886804719477,
            0.3872570227837733,
        ),
        "FourWing" => (
            &[0.07922889887312659, -0.00022402753535681778, -1.279004865508541],
            2.0258306334845804,
            0.037058566449793204,
        ),
        "GenesioTesi" => (
            &[0.10515294703720357, 0.0007700944813583301, -0.545923041605793],
            2.1176106110892605,
            0.4538077350661867,
        ),
        "Hadley" => (
            &[0.17601507451028775, 0.0001906969695861356, -0.3871327041420463],
            2.5791130460978597,
            0.3325888575021386,
        ),
        "Halvorsen" => (
            &[0.710066035157393, 4.857535635510007e-5, -4.910114680227203],
            1.9793847152171617,
            0.5631706435253019,
        ),
        "HenonHeiles" => (
            &[0.1344209252642213, 0.0013053689636764497, -0.0020134827379993457, -0.13371281152837627],
            2.726638874700017,
            0.38650491297611006,
        ),
        "HindmarshRose" => (
            &[0.022342572702581113, 0.00020278038113580077, -8.496418841173902],
            1.6420345995488175,
            0.021035802610422177,
        ),
        "Lorenz" => (
            &[0.9060107906224533, 0.00011642258017010187, -14.572793104003566],
            2.0757071496259236,
            0.3527646114971974,
        ),
        "Lorenz96" => (
            &[0.4103422681725839, 1.0360329985177943e-14, -0.5098397183566158, -1.2757200821954702, -3.6247824274239866],
            2.503711598122555,
            0.4953143256499475,
        ),
        "MooreSpiegel" => (
            &[0.13167455961485594, -0.00012258918281337077, -1.1315519593205423],
            1.441627144722168,
            0.3228645905965026,
        ),
        "Rikitake" => (
            &[0.11412815659678958, -0.0007301286640160006, -4.113397830958177],
            1.9912036654062462,
            0.1580799168773394,
        ),
        "Rossler" => (
            &[0.08024026062060984, 0.00017777474274625055, -5.412885259815958],
            1.8027786249953046,
            0.4235163273997921,
        ),
        "Rucklidge" => (
            &[0.19907029414982447, 0.0005853058989782357, -3.1996555080567433],
            2.0191331301303164,
            0.4968712129377268,
        ),
        "ShimizuMorioka" => (
            &[0.0678785710397218, 8.680861836629117e-5, -1.2679653789712244],
            1.9525952188480857,
            0.2293683865165385,
        ),
        "SprottB" => (
            &[0.20821611113523045, 8.075531211667415e-5, -1.2082968663169467],
            2.2978208638841453,
            0.14984809798351115,
        ),
        "Thomas" => (
            &[0.03797674137203015, -0.0005352990634628841, -0.5774414401039123],
            1.8680273090117667,
            0.3948973978282548,
        ),
        "Torus" => (
            &[-5.799373366113226e-12, -0.000817082881076531, -1.9991829176316596, -1.9999999993649706],
            2.095308868649543,
            0.22954123787115396,
        ),
        _ => return None,
    };
    let largest = spectrum.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let pesin = spectrum.iter().filter(|&&l| l > 0.0).sum();
    Some(SystemAnnotations {
        lyapunov_spectrum: spectrum.to_vec(),
        largest_lyapunov: largest,
        correlation_dimension: corr_dim,
        kaplan_yorke_dimension: crate::characterize::kaplan_yorke_of(spectrum),
        multiscale_entropy: mse,
        pesin_entropy: pesin,
    })
}
