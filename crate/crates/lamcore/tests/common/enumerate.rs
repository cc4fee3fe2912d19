//! Every primitive curve with coordinates bounded by a constant.

use lamcore::surface::{primitive, surface, validate_normal, NormalMulticurve};

pub fn curves(genus: usize, max_entry: u64) -> Vec<NormalMulticurve> {
    let surf = surface(genus).unwrap();
    let ne = surf.num_edges();
    let mut coords = vec![0u64; ne];
    let mut out = Vec::new();
    loop {
        if let Ok(m) = validate_normal(&surf, &coords) {
            if let Ok(c) = primitive(&m) {
                if c.coords() == coords.as_slice() {
                    out.push(c);
                }
            }
        }
        let mut i = 0;
        while i < ne && coords[i] == max_entry {
            coords[i] = 0;
            i += 1;
        }
        if i == ne {
            break;
        }
        coords[i] += 1;
    }
    out
}
