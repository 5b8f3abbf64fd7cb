use iotc_core::{Deployment, DeviceDecl, Loc, RegionEntry, RegionPath};

/// Buildings, floors and rooms of the generated grid.
pub const GRID: (i64, i64, i64) = (2, 3, 4);

fn base_name(name: &str) -> &str {
    match name.rsplit_once('-') {
        Some((base, n)) if !base.is_empty() && !n.is_empty() && n.bytes().all(|b| b.is_ascii_digit()) => base,
        _ => name,
    }
}

/// `n` devices laid out round-robin over the grid, starting at cell
/// `seed % cells`. Device `i` copies resources, platform and mobility
/// from template device `i % len` and is named `<base>-<i+1>`, where
/// `<base>` is the template name without a trailing `-<digits>`.
///
/// Region labels come from the template's first device, which must have
/// a three-level path.
pub fn generate_scaled_deployment(template: &Deployment, n: usize, seed: u64) -> Deployment {
    assert!(n >= 1, "at least one device");
    let first = template.devices.first().expect("template has devices");
    let labels: Vec<&str> = first.region.entries().iter().map(|e| e.label.as_str()).collect();
    assert_eq!(labels.len(), 3, "template paths need three levels");

    let (nb, nf, nr) = GRID;
    let cells = (nb * nf * nr) as u64;
    let start = seed % cells;
    let devices = (0..n)
        .map(|i| {
            let t = &template.devices[i % template.devices.len()];
            let c = ((start + i as u64) % cells) as i64;
            let values = [c / (nf * nr) + 1, (c / nr) % nf + 1, c % nr + 1];
            let region = RegionPath::new(labels.iter().zip(values).map(|(l, v)| RegionEntry::new(*l, v)).collect());
            DeviceDecl {
                name: format!("{}-{}", base_name(&t.name), i + 1),
                region,
                region_loc: Loc::default(),
                resources: t.resources.clone(),
                platform_type: t.platform_type.clone(),
                mobile: t.mobile,
                loc: Loc::default(),
            }
        })
        .collect();
    Deployment {
        name: format!("{}-{n}", template.name),
        vocabulary_name: template.vocabulary_name.clone(),
        devices,
        loc: Loc::default(),
    }
}
