//! Name → implementation tables for the pluggable algorithm variants.

use crate::error::{Error, Result};

pub trait Named {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str {
        ""
    }
}

pub struct Registry<T: ?Sized + Named> {
    kind: &'static str,
    entries: Vec<Box<T>>,
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Registry {
            kind,
            entries: Vec::new(),
        }
    }

    /// Later registrations under an existing name replace the earlier one.
    pub fn register(&mut self, entry: Box<T>) -> &mut Self {
        if let Some(slot) = self.entries.iter_mut().find(|e| e.name() == entry.name()) {
            *slot = entry;
        } else {
            self.entries.push(entry);
        }
        self
    }

    pub fn with(mut self, entry: Box<T>) -> Self {
        self.register(entry);
        self
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::Unknown {
                kind: self.kind,
                name: name.to_string(),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.entries.iter().map(|b| b.as_ref())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    trait Greeter: Named {
        fn greet(&self) -> String;
    }

    struct Plain(&'static str, &'static str);

    impl Named for Plain {
        fn name(&self) -> &'static str {
            self.0
        }
    }

    impl Greeter for Plain {
        fn greet(&self) -> String {
            self.1.to_string()
        }
    }

    #[test]
    fn lookup_and_replace() {
        let mut r: Registry<dyn Greeter> = Registry::new("greeter");
        r.register(Box::new(Plain("a", "hi")))
            .register(Box::new(Plain("b", "yo")));
        assert_eq!(r.get("b").unwrap().greet(), "yo");
        r.register(Box::new(Plain("b", "hey")));
        assert_eq!(r.names(), vec!["a", "b"]);
        assert_eq!(r.get("b").unwrap().greet(), "hey");
        assert_eq!(
            r.get("c").err(),
            Some(Error::Unknown {
                kind: "greeter",
                name: "c".into()
            })
        );
    }
}
