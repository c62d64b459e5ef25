//! Deterministic generator for a benchmark-shaped intent corpus.
//!
//! Produces the same seven intent labels, per-class counts and overall scale
//! as the reference dataset, with template-generated query text. Entity
//! fillers (names, cities, titles) are drawn from combinatorial pools with a
//! skewed distribution, so a frequency-truncated vocabulary sees the same
//! regime as on real data: template words stay in-vocabulary while rare
//! entities fall out.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Utterance;

/// Intent labels with their sample counts (total 14484).
pub const INTENT_COUNTS: [(&str, usize); 7] = [
    ("AddToPlaylist", 2042),
    ("BookRestaurant", 2073),
    ("GetWeather", 2100),
    ("PlayMusic", 2100),
    ("RateBook", 2056),
    ("SearchCreativeWork", 2054),
    ("SearchScreeningEvent", 2059),
];

/// Full-size corpus (14484 utterances), shuffled, deterministic in `seed`.
pub fn generate(seed: u64) -> Vec<Utterance> {
    let counts: Vec<usize> = INTENT_COUNTS.iter().map(|&(_, c)| c).collect();
    generate_with_counts(seed, &counts)
}

/// Corpus with custom per-intent counts, aligned with [`INTENT_COUNTS`] order.
pub fn generate_with_counts(seed: u64, counts: &[usize]) -> Vec<Utterance> {
    assert_eq!(counts.len(), INTENT_COUNTS.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pools = Pools::build();
    let mut out = Vec::with_capacity(counts.iter().sum());
    for (&(intent, _), &count) in INTENT_COUNTS.iter().zip(counts) {
        let templates = templates_for(intent);
        for _ in 0..count {
            let template = templates[rng.random_range(0..templates.len())];
            out.push(Utterance {
                text: realize(template, &mut rng, &pools),
                intent: intent.to_string(),
            });
        }
    }
    out.shuffle(&mut rng);
    out
}

fn realize(template: &str, rng: &mut ChaCha8Rng, pools: &Pools) -> String {
    let mut words: Vec<String> = Vec::new();
    for tok in template.split_whitespace() {
        if let Some(slot) = tok.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
            words.push(pools.fill(slot, rng));
        } else {
            words.push(tok.to_string());
        }
    }
    words.join(" ")
}

struct Pools {
    surnames: Vec<String>,
    cities: Vec<String>,
    titles_adj: Vec<&'static str>,
    titles_noun: Vec<&'static str>,
}

impl Pools {
    fn build() -> Self {
        // Combinatorial surname and city pools keep entity tokens plentiful
        // and mostly rare, like proper nouns in real queries.
        let mut surnames = Vec::new();
        for a in SYL_A {
            for b in SYL_B {
                surnames.push(format!("{a}{b}"));
            }
        }
        let mut cities: Vec<String> = REAL_CITIES.iter().map(|s| s.to_string()).collect();
        for a in SYL_A {
            for suffix in CITY_SUFFIXES {
                cities.push(format!("{a}{suffix}"));
            }
        }
        Pools {
            surnames,
            cities,
            titles_adj: TITLE_ADJ.to_vec(),
            titles_noun: TITLE_NOUN.to_vec(),
        }
    }

    fn fill(&self, slot: &str, rng: &mut ChaCha8Rng) -> String {
        match slot {
            "artist" => {
                let first = pick(rng, FIRST_NAMES);
                let last = pick_owned(rng, &self.surnames);
                format!("{first} {last}")
            }
            "city" => {
                if rng.random_bool(0.25) {
                    format!("{} {}", pick(rng, CITY_PREFIXES), pick_owned(rng, &self.cities))
                } else {
                    pick_owned(rng, &self.cities)
                }
            }
            "title" => {
                let adj = pick(rng, &self.titles_adj);
                let noun = pick(rng, &self.titles_noun);
                match rng.random_range(0..4) {
                    0 => format!("the {adj} {noun}"),
                    1 => format!("{adj} {noun}"),
                    2 => format!("the {noun} of the {}", pick(rng, &self.titles_noun)),
                    _ => format!("a {noun} for the {adj}"),
                }
            }
            "playlist" => {
                if rng.random_bool(0.5) {
                    pick(rng, PLAYLISTS).to_string()
                } else {
                    format!("{} {}", pick(rng, TITLE_ADJ), pick(rng, GENRES))
                }
            }
            "genre" => pick(rng, GENRES).to_string(),
            "service" => pick(rng, SERVICES).to_string(),
            "cuisine" => pick(rng, CUISINES).to_string(),
            "restaurant" => {
                let last = pick_owned(rng, &self.surnames);
                format!("{last} {}", pick(rng, RESTO_KINDS))
            }
            "resto_kind" => pick(rng, RESTO_KINDS).to_string(),
            "count" => pick(rng, COUNTS).to_string(),
            "time_phrase" => match rng.random_range(0..4) {
                0 => pick(rng, TIME_SIMPLE).to_string(),
                1 => format!("next {}", pick(rng, WEEKDAYS)),
                2 => format!("on {}", pick(rng, WEEKDAYS)),
                _ => format!("on {} {}", pick(rng, MONTHS), pick(rng, ORDINALS)),
            },
            "weather_verb" => pick(rng, WEATHER_VERBS).to_string(),
            "weather_noun" => pick(rng, WEATHER_NOUNS).to_string(),
            "temp_adj" => pick(rng, TEMP_ADJ).to_string(),
            "rating" => pick(rng, RATINGS).to_string(),
            "scale" => pick(rng, SCALES).to_string(),
            "book_kind" => pick(rng, BOOK_KINDS).to_string(),
            "work_kind" => pick(rng, WORK_KINDS).to_string(),
            "theatre" => {
                let last = pick_owned(rng, &self.surnames);
                format!("{last} {}", pick(rng, THEATRE_KINDS))
            }
            "chain" => pick(rng, CHAINS).to_string(),
            "decade" => pick(rng, DECADES).to_string(),
            "year" => {
                let y = 1950 + rng.random_range(0..75);
                y.to_string()
            }
            other => panic!("unknown template slot {other:?}"),
        }
    }
}

/// Skewed pool sampling: quadratic bias toward the front of the pool, so
/// early entries behave like frequent words and late ones like rare ones.
fn pick<'a>(rng: &mut ChaCha8Rng, pool: &[&'a str]) -> &'a str {
    let u: f64 = rng.random();
    pool[((u * u) * pool.len() as f64) as usize]
}

fn pick_owned(rng: &mut ChaCha8Rng, pool: &[String]) -> String {
    let u: f64 = rng.random();
    pool[((u * u) * pool.len() as f64) as usize].clone()
}

fn templates_for(intent: &str) -> &'static [&'static str] {
    match intent {
        "AddToPlaylist" => &[
            "add {artist} to my {playlist} playlist",
            "add this song to {playlist}",
            "add {title} to the {playlist} playlist",
            "put {artist} onto my {playlist} list",
            "i want to add {title} to my {playlist} playlist",
            "can you put this tune on {playlist}",
            "add the album by {artist} to {playlist}",
            "add {title} by {artist} to the playlist {playlist}",
            "put {title} in the playlist {playlist}",
            "add a track by {artist} to {playlist}",
            "include {artist} in my {playlist} playlist",
            "stick {title} onto {playlist}",
            "add {artist} songs in {playlist}",
            "add this {genre} track to my {playlist} playlist",
        ],
        "BookRestaurant" => &[
            "book a table for {count} at {restaurant} in {city}",
            "i need a reservation for {count} people at a {cuisine} restaurant",
            "reserve a table at {restaurant} for {time_phrase}",
            "book a {cuisine} place in {city} for {count}",
            "find me a table for {count} somewhere in {city} {time_phrase}",
            "make a reservation at a {resto_kind} with {cuisine} food",
            "book {restaurant} for {count} people {time_phrase}",
            "i want to eat {cuisine} food in {city} {time_phrase}",
            "reserve a spot for {count} at the {resto_kind} near {city}",
            "book a highly rated {resto_kind} for {time_phrase}",
            "table for {count} at {restaurant} please",
            "get me a booking at {restaurant} in {city} for {time_phrase}",
            "book me a {resto_kind} serving {cuisine} for {count} people",
        ],
        "GetWeather" => &[
            "what is the weather forecast for {city}",
            "will it {weather_verb} in {city} {time_phrase}",
            "how {temp_adj} will it be in {city} {time_phrase}",
            "what is the forecast for {time_phrase} in {city}",
            "tell me the weather in {city}",
            "is it going to be {temp_adj} in {city} {time_phrase}",
            "what kind of weather is forecast {time_phrase} near {city}",
            "will there be {weather_noun} in {city} {time_phrase}",
            "check the forecast for {city}",
            "weather for {city} {time_phrase} please",
            "do i need an umbrella in {city} {time_phrase}",
            "what will the temperature be in {city} {time_phrase}",
            "is {weather_noun} expected around {city} {time_phrase}",
        ],
        "PlayMusic" => &[
            "play {title} by {artist}",
            "play some {genre} music",
            "play the latest {artist} album",
            "i want to hear {title} from {artist}",
            "play {genre} on {service}",
            "put on some {genre} tunes",
            "play the song {title}",
            "play {artist} greatest hits on {service}",
            "start playing {title}",
            "play a {genre} track from {year}",
            "turn on {service} and play {title}",
            "let me hear some {decade} {genre}",
            "play music by {artist} on {service}",
            "use {service} to play {title} by {artist}",
        ],
        "RateBook" => &[
            "rate {title} {rating} out of {scale}",
            "give {title} a rating of {rating}",
            "rate this book {rating} stars",
            "i would rate {title} a {rating}",
            "give the {book_kind} {title} {rating} points",
            "rate the current {book_kind} {rating} out of {scale} stars",
            "mark {title} as a {rating} of {scale}",
            "score {title} {rating} stars out of {scale}",
            "this {book_kind} deserves a {rating}",
            "rate the {book_kind} series {title} a {rating}",
            "give {rating} out of {scale} to {title}",
            "rate {title} by {artist} {rating} stars",
        ],
        "SearchCreativeWork" => &[
            "find the {work_kind} {title}",
            "show me the {work_kind} called {title}",
            "i am looking for the {work_kind} {title}",
            "can you find {title}",
            "search for the {work_kind} {title}",
            "find me a {work_kind} named {title}",
            "look up the {work_kind} {title}",
            "please find me the {work_kind} {title}",
            "where can i find the {work_kind} {title}",
            "get me the {work_kind} {title}",
            "find the {work_kind} {title} by {artist}",
            "search {service} for the {work_kind} {title}",
        ],
        "SearchScreeningEvent" => &[
            "what movies are playing at {theatre}",
            "find movie schedules for {chain} in {city}",
            "when is {title} showing at {theatre}",
            "is {title} playing {time_phrase} near {city}",
            "show me the movie times at {theatre}",
            "find the nearest cinema showing {title}",
            "what films are scheduled at {chain} {time_phrase}",
            "i want to see {title} at the {theatre}",
            "movie schedule for {city} {time_phrase}",
            "check showtimes for {title} in {city}",
            "where is {title} screening {time_phrase}",
            "what is playing at the {chain} in {city}",
            "find animated movies playing at {theatre} {time_phrase}",
        ],
        other => panic!("unknown intent {other:?}"),
    }
}

const FIRST_NAMES: &[&str] = &[
    "james", "maria", "otis", "nina", "lena", "sam", "ella", "marco", "ada", "theo", "ivy",
    "carl", "ruth", "omar", "june", "max", "rosa", "levi", "wren", "hugo", "mara", "saul",
    "faye", "enzo", "tess", "noel", "lara", "finn", "vera", "axel", "cleo", "dario", "isla",
    "bruno", "petra", "silas", "nadia", "emil", "freya", "jonas", "selma", "viktor", "alma",
    "ciro", "dora", "anton", "mila", "ruben",
];

const SYL_A: &[&str] = &[
    "mor", "vel", "kar", "len", "tor", "bas", "del", "fen", "gal", "hol", "jar", "kel", "lor",
    "mer", "nor", "pel", "ral", "sor", "tal", "var", "wil", "yor", "zan", "bren", "cas", "dov",
    "ek", "fal", "gri", "hask", "ingr", "jun", "kov", "lind", "mal", "nev", "ost", "pram",
    "quin", "rud", "sten", "thur", "ulv", "vin", "wes", "yar",
];

const SYL_B: &[&str] = &[
    "son", "berg", "field", "man", "sen", "to", "vik", "dale", "mont", "ley", "worth", "ham",
    "stead", "rick", "well", "born", "gard", "lund", "mark", "ness", "quist", "ross", "tide",
    "wood", "strom", "by", "thorn", "veld", "anos", "etti", "ova", "aki", "escu", "idis",
    "ainen", "holt", "mere", "stad", "wick", "combe",
];

const REAL_CITIES: &[&str] = &[
    "boston", "madrid", "lisbon", "oslo", "denver", "austin", "seville", "porto", "geneva",
    "turin", "leeds", "cork", "bergen", "ghent", "graz", "lyon", "malmo", "nantes", "parma",
    "quito", "riga", "split", "tampa", "utrecht", "verona", "warsaw", "york", "zagreb",
    "anaheim", "boise", "camden", "dayton", "eugene", "fresno", "greely", "hobart",
];

const CITY_PREFIXES: &[&str] = &["east", "west", "north", "south", "new", "old", "fort", "lake"];

const CITY_SUFFIXES: &[&str] = &["ville", "ton", "burg", "port", "mouth", "ford"];

const TITLE_ADJ: &[&str] = &[
    "silent", "broken", "hidden", "crimson", "golden", "endless", "little", "lonely", "burning",
    "frozen", "wild", "secret", "distant", "hollow", "silver", "velvet", "bitter", "gentle",
    "restless", "iron", "pale", "scarlet", "quiet", "shattered", "midnight", "electric",
    "forgotten", "radiant", "sleepless", "wandering", "ancient", "brave", "crooked", "dusty",
    "emerald", "faithful", "grim", "hasty", "ivory", "jagged", "kindred", "luminous",
];

const TITLE_NOUN: &[&str] = &[
    "river", "garden", "mountain", "dream", "summer", "winter", "road", "moon", "star",
    "shadow", "harbor", "window", "mirror", "storm", "forest", "ocean", "letter", "journey",
    "castle", "bridge", "lantern", "meadow", "orchard", "island", "portrait", "raven",
    "sparrow", "tempest", "umbrella", "valley", "whisper", "anthem", "ballad", "chronicle",
    "daughter", "empire", "feather", "glacier", "horizon", "inkwell", "jubilee", "kingdom",
    "labyrinth", "mariner", "nocturne", "overture", "pilgrim", "quarry", "requiem", "sonata",
];

const PLAYLISTS: &[&str] = &[
    "workout", "road trip", "morning coffee", "throwback thursday", "summer vibes",
    "study beats", "dinner party", "rainy day", "late night drive", "deep focus", "gym hits",
    "sunday chill", "feel good", "running mix", "acoustic morning",
];

const GENRES: &[&str] = &[
    "jazz", "rock", "pop", "folk", "blues", "soul", "funk", "techno", "reggae", "country",
    "disco", "metal", "punk", "gospel", "ska", "swing", "ambient", "opera", "salsa", "tango",
    "house", "grunge", "bluegrass", "flamenco",
];

const SERVICES: &[&str] = &[
    "spotify", "deezer", "itunes", "groove shark", "pandora", "last fm", "youtube", "zvooq",
    "slacker", "vimeo", "netflix", "google music",
];

const CUISINES: &[&str] = &[
    "italian", "thai", "mexican", "french", "greek", "indian", "japanese", "korean", "spanish",
    "turkish", "lebanese", "vietnamese", "ethiopian", "polish", "brazilian", "cuban",
    "moroccan", "german", "peruvian", "cajun", "tuscan", "sichuan",
];

const RESTO_KINDS: &[&str] = &[
    "brasserie", "bistro", "diner", "steakhouse", "tavern", "pub", "food truck", "tea house",
    "gastropub", "trattoria", "osteria", "cafeteria", "pizzeria", "grill",
];

const COUNTS: &[&str] = &["two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "a dozen"];

const TIME_SIMPLE: &[&str] = &[
    "tomorrow", "today", "tonight", "this evening", "this weekend", "next week", "at noon",
    "in two hours", "at dinner time", "later today", "in the morning", "at midnight",
];

const WEEKDAYS: &[&str] = &[
    "monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday",
];

const MONTHS: &[&str] = &[
    "january", "february", "march", "april", "may", "june", "july", "august", "september",
    "october", "november", "december",
];

const ORDINALS: &[&str] = &[
    "first", "second", "third", "fourth", "fifth", "tenth", "twelfth", "fifteenth",
    "twentieth", "thirtieth",
];

const WEATHER_VERBS: &[&str] = &["rain", "snow", "hail", "storm", "drizzle", "freeze", "thunder"];

const WEATHER_NOUNS: &[&str] = &[
    "rain", "snow", "fog", "wind", "hail", "sunshine", "sleet", "a blizzard", "cloudy skies",
    "a heatwave", "thunderstorms", "humidity",
];

const TEMP_ADJ: &[&str] = &["hot", "cold", "chilly", "warm", "freezing", "humid", "windy", "sunny"];

const RATINGS: &[&str] = &["zero", "one", "two", "three", "four", "five", "six"];

const SCALES: &[&str] = &["six", "ten"];

const BOOK_KINDS: &[&str] = &[
    "book", "novel", "essay", "saga", "chronicle", "textbook", "album", "memoir", "anthology",
];

const WORK_KINDS: &[&str] = &[
    "movie", "film", "song", "album", "tv show", "saga", "book", "novel", "picture",
    "painting", "trailer", "game", "soundtrack", "series",
];

const THEATRE_KINDS: &[&str] = &["cinema", "movie theatre", "movie house", "multiplex"];

const CHAINS: &[&str] = &[
    "amc", "cinemark", "regal", "imax", "megaplex", "odeon", "cineworld", "pathe",
];

const DECADES: &[&str] = &["eighties", "nineties", "sixties", "seventies", "twenties", "fifties"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_vocab, class_balance, normalize};
    use std::collections::HashSet;

    #[test]
    fn full_corpus_matches_reference_shape() {
        let data = generate(1);
        assert_eq!(data.len(), 14484);
        let counts = class_balance(&data).unwrap();
        assert_eq!(counts.len(), 7);
        let max = counts.iter().max_by_key(|c| c.count).unwrap();
        let min = counts.iter().min_by_key(|c| c.count).unwrap();
        assert_eq!(max.count, 2100);
        assert_eq!(min.count, 2042);
        assert!((max.percent - 14.5).abs() < 0.05);
        assert!((min.percent - 14.1).abs() < 0.05);
    }

    #[test]
    fn generation_is_deterministic() {
        assert_eq!(generate(7), generate(7));
        assert_ne!(generate(7), generate(8));
    }

    #[test]
    fn vocabulary_is_large_enough_to_need_truncation() {
        let data = generate(1);
        let mut distinct: HashSet<String> = HashSet::new();
        for u in &data {
            distinct.extend(normalize(&u.text));
        }
        assert!(
            distinct.len() > 1500,
            "only {} distinct tokens",
            distinct.len()
        );
        let vocab = build_vocab(&data, 1000).unwrap();
        assert_eq!(vocab.size(), 1002);
    }

    #[test]
    fn sentences_have_natural_lengths() {
        let data = generate_with_counts(3, &[40, 40, 40, 40, 40, 40, 40]);
        for u in &data {
            let toks = normalize(&u.text);
            assert!(toks.len() >= 3 && toks.len() <= 18, "odd length: {}", u.text);
        }
    }
}
