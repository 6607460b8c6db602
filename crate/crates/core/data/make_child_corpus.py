"""Generates child.txt, a synthetic child-directed corpus.

Short utterances built from a few high-frequency frames, a small noun and
verb vocabulary, and many repetitions, in the single-character alphabet of
english.inv. Deterministic: rerunning reproduces the file byte for byte.
"""

import random

NOUNS = {
    "doggie": "dɔgi", "kitty": "kɪti", "ball": "bɔl", "book": "bʊk",
    "bunny": "bʌni", "duck": "dʌk", "truck": "trʌk", "car": "kɑr",
    "cup": "kʌp", "juice": "Jus", "milk": "mɪlk", "apple": "æpL",
    "cookie": "kʊki", "shoe": "ʃu", "hat": "hæt", "bear": "bεr",
    "fish": "fɪʃ", "bird": "bRd", "boy": "b7", "girl": "gRl",
    "mommy": "mɑmi", "daddy": "dædi", "house": "hWs", "box": "bɑks",
    "spoon": "spun", "block": "blɑk", "bottle": "bɑtL", "nose": "noz",
    "hand": "hænd", "tummy": "tʌmi", "toy": "t7", "train": "tren",
    "horse": "hɔrs", "cow": "kW", "pig": "pɪg", "baby": "bebi",
    "blanket": "blæŋkɪt", "sock": "sɑk", "cat": "kæt", "dog": "dɔg",
    "sheep": "ʃip", "monkey": "mʌŋki", "frog": "frɑg", "chair": "Cεr",
    "table": "tebL", "door": "dɔr", "window": "wɪndo", "bed": "bεd",
    "bath": "bæθ", "water": "wɑtR", "banana": "bənænə", "egg": "εg",
    "bread": "brεd", "picture": "pɪkCR", "flower": "flWR", "tree": "tri",
    "moon": "mun", "star": "stɑr", "boat": "bot", "plane": "plen",
    "drum": "drʌm", "puppy": "pʌpi", "lamb": "læm", "mouse": "mWs",
    "pants": "pænts", "coat": "kot", "ear": "ir", "foot": "fʊt",
    "lion": "lYən", "bug": "bʌg", "rabbit": "ræbɪt", "wagon": "wægən",
    "peas": "piz", "crayon": "kreɑn", "kitchen": "kɪCən", "bowl": "bol",
    "clock": "klɑk", "phone": "fon", "key": "ki", "bag": "bæg",
    "hair": "hεr", "sun": "sʌn", "rain": "ren", "snow": "sno",
    "cake": "kek", "cheese": "Ciz", "grapes": "greps", "wheel": "wil",
    "button": "bʌtən", "zipper": "zɪpR", "pillow": "pɪlo", "doll": "dɑl",
    "puzzle": "pʌzL", "swing": "swɪŋ", "slide": "slYd", "park": "pɑrk",
}
ADJS = {
    "big": "bɪg", "little": "lɪtL", "nice": "nYs", "red": "rεd",
    "blue": "blu", "green": "grin", "soft": "sɔft", "wet": "wεt",
    "pretty": "prɪti", "funny": "fʌni", "hot": "hɑt", "yellow": "jεlo",
    "dirty": "dRti", "silly": "sɪli", "sleepy": "slipi", "happy": "hæpi",
    "cold": "kold", "tiny": "tYni", "round": "rWnd", "white": "wYt",
    "fast": "fæst", "warm": "wɔrm", "heavy": "hεvi", "new": "nu",
}
VERBS = {
    "throw": "θro", "push": "pʊʃ", "open": "opən", "find": "fYnd",
    "hold": "hold", "hug": "hʌg", "kiss": "kɪs", "read": "rid",
    "drink": "drɪŋk", "eat": "it", "wash": "wɑʃ", "get": "gεt",
    "help": "hεlp", "splash": "splæʃ", "bring": "brɪŋ", "touch": "tʌC",
    "catch": "kæC", "roll": "rol", "pat": "pæt", "feed": "fid",
    "draw": "drɔ", "build": "bɪld", "fix": "fɪks", "close": "kloz",
}
W = {
    "the": "ðə", "a": "ə", "you": "ju", "do": "du", "is": "ɪz",
    "it": "ɪt", "that": "ðæt", "this": "ðɪs", "what's": "wʌts",
    "where's": "wεrz", "look": "lʊk", "at": "æt", "see": "si",
    "want": "wɑnt", "can": "kæn", "say": "se", "put": "pʊt",
    "in": "ɪn", "on": "ɑn", "your": "jɔr", "my": "mY", "me": "mi",
    "to": "tu", "and": "ænd", "oh": "o", "yes": "jεs", "no": "no",
    "good": "gʊd", "that's": "ðæts", "let's": "lεts", "like": "lYk",
    "there": "ðεr", "here": "hir", "it's": "ɪts", "go": "go",
    "bye": "bY", "hi": "hY", "now": "nW", "up": "ʌp", "all": "ɔl",
    "gone": "gɔn", "more": "mɔr", "please": "pliz", "wow": "wW",
    "with": "wɪð", "he": "hi", "she": "ʃi", "we": "wi", "are": "ɑr",
    "okay": "oke", "very": "vεri", "some": "sʌm", "one": "wʌn",
    "where": "wεr", "how": "hW", "about": "əbWt", "don't": "dont",
    "who": "hu", "has": "hæz", "thank": "θæŋk", "come": "kʌm",
    "what": "wʌt", "does": "dʌz", "i": "Y", "think": "θɪŋk", "so": "so",
    "will": "wɪl", "out": "Wt", "soon": "sun", "sit": "sɪt", "down": "dWn",
}


def zipf_pick(rng, items, s=1.0):
    weights = [1.0 / (i + 1) ** s for i in range(len(items))]
    return rng.choices(items, weights=weights)[0]


def main():
    rng = random.Random(1994)
    nouns = list(NOUNS)
    adjs = list(ADJS)
    verbs = list(VERBS)
    rng.shuffle(nouns)
    rng.shuffle(adjs)
    rng.shuffle(verbs)

    def n():
        return zipf_pick(rng, nouns, 0.5)

    def a():
        return zipf_pick(rng, adjs, 0.6)

    def v():
        return zipf_pick(rng, verbs, 0.6)

    frames = [
        (6, lambda: ["look", "at", "the", n()]),
        (6, lambda: ["do", "you", "want", "the", n()]),
        (5, lambda: ["what's", "that"]),
        (5, lambda: ["that's", "a", n()]),
        (5, lambda: ["where's", "the", n()]),
        (4, lambda: ["can", "you", "say", n()]),
        (4, lambda: [n()]),
        (3, lambda: ["yes"]),
        (3, lambda: ["oh", "look"]),
        (3, lambda: ["good"]),
        (3, lambda: ["is", "that", "a", n()]),
        (3, lambda: ["the", n(), "is", a()]),
        (3, lambda: ["you", "like", "the", n()]),
        (3, lambda: ["let's", v(), "the", n()]),
        (2, lambda: ["put", "the", n(), "in", "the", n()]),
        (2, lambda: ["it's", "a", a(), n()]),
        (2, lambda: ["see", "the", n()]),
        (2, lambda: ["here", "it", "is"]),
        (2, lambda: ["can", "you", v(), "it"]),
        (2, lambda: ["a", a(), n()]),
        (1, lambda: ["bye", "bye"]),
        (1, lambda: ["all", "gone"]),
        (1, lambda: ["more", n(), "please"]),
        (1, lambda: ["there", "you", "go"]),
        (1, lambda: ["no"]),
        (1, lambda: ["wow"]),
        (1, lambda: ["okay"]),
        (1, lambda: ["hi", n()]),
        (1, lambda: ["we", v(), "the", n(), "now"]),
        (1, lambda: ["she", "is", "very", a()]),
        (1, lambda: ["he", "wants", "some", "more"]),
        (1, lambda: ["look", "at", "my", n()]),
        (1, lambda: ["your", n(), "and", "my", n()]),
        (1, lambda: ["one", n(), "up", "on", "the", n()]),
        (1, lambda: ["help", "me", "with", "the", n()]),
        (1, lambda: ["are", "you", a()]),
        (1, lambda: ["want", "me", "to", "help", "the", "baby"]),
        (1, lambda: ["you", "can", v(), "it", "to", "me"]),
        (2, lambda: ["where", "is", "your", n()]),
        (1, lambda: ["is", "this", "your", n()]),
        (1, lambda: ["how", "about", "the", n()]),
        (1, lambda: ["don't", v(), "the", n()]),
        (1, lambda: ["who", "has", "the", n()]),
        (1, lambda: ["thank", "you"]),
        (1, lambda: ["come", "here"]),
        (1, lambda: ["what", "does", "the", n(), "say"]),
        (1, lambda: ["i", "think", "so"]),
        (1, lambda: ["we", "will", "go", "out", "soon"]),
        (1, lambda: ["sit", "down"]),
    ]
    weights = [w for w, _ in frames]
    lexicon = dict(NOUNS)
    lexicon.update(ADJS)
    lexicon.update(VERBS)
    lexicon.update(W)
    lexicon["wants"] = "wɑnts"

    lines = []
    tokens = 0
    while tokens < 540:
        frame = rng.choices(frames, weights=weights)[0][1]
        words = frame()
        tokens += len(words)
        lines.append(" ".join(lexicon[w] for w in words))

    with open("child.txt", "w", encoding="utf-8") as out:
        out.write("# Synthetic child-directed speech, generated by make_child_corpus.py.\n")
        for line in lines:
            out.write(line + "\n")


if __name__ == "__main__":
    main()
