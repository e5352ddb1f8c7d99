use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::arith::bqf::{compose_forms, Bqf};
use crate::arith::genus::genus_signature;
use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroup {
    pub disc: i64,
    /// Reduced primitive forms, sorted; the principal form comes first.
    pub classes: Vec<Bqf>,
    pub genus_chars: Vec<Vec<i32>>,
}

impl ClassGroup {
    pub fn h(&self) -> usize {
        self.classes.len()
    }

    pub fn index_of(&self, f: &Bqf) -> Option<usize> {
        self.classes.binary_search(f).ok()
    }

    /// Composition table: table[i][j] = index of classes[i]·classes[j].
    pub fn table(&self) -> Vec<Vec<usize>> {
        self.classes
            .iter()
            .map(|f| {
                self.classes
                    .iter()
                    .map(|g| self.index_of(&compose_forms(f, g).expect("same discriminant")).expect("closed"))
                    .collect()
            })
            .collect()
    }

    /// The principal genus: classes with all genus characters +1.
    pub fn principal_genus(&self) -> Vec<usize> {
        (0..self.h()).filter(|&i| self.genus_chars[i].iter().all(|&c| c == 1)).collect()
    }
}

fn cache() -> &'static RwLock<HashMap<i64, Arc<ClassGroup>>> {
    static CACHE: OnceLock<RwLock<HashMap<i64, Arc<ClassGroup>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Reduced primitive forms of a negative discriminant (cached).
pub fn class_group(disc: i64) -> Result<Arc<ClassGroup>> {
    if disc >= 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
        return invalid(format!("invalid discriminant {disc}"));
    }
    if let Some(cg) = cache().read().expect("cache lock").get(&disc) {
        return Ok(cg.clone());
    }
    let mut classes = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -disc {
        for b in (-a + 1)..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = Bqf::new(a, b, num / (4 * a));
            if f.is_reduced() && f.is_primitive() {
                classes.push(f);
            }
        }
        a += 1;
    }
    classes.sort();
    let genus_chars = classes.iter().map(genus_signature).collect();
    let cg = Arc::new(ClassGroup { disc, classes, genus_chars });
    cache().write().expect("cache lock").insert(disc, cg.clone());
    Ok(cg)
}
