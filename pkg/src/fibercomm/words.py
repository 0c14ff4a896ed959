"""Free group words over a symbol alphabet.

A word is a tuple of oriented letters.  The letter ``"a"`` is a basis symbol
and ``"~a"`` is its inverse; the same convention is used for oriented edges
elsewhere, so paths and words share all the reduction machinery here.
"""

from itertools import product

Word = tuple  # tuple of oriented letters


def inv(letter):
    """Inverse of a single oriented letter."""
    return letter[1:] if letter.startswith("~") else "~" + letter


def base(letter):
    """Underlying symbol of an oriented letter (strips the ``~``)."""
    return letter[1:] if letter.startswith("~") else letter


def is_positive(letter):
    return not letter.startswith("~")


def inverse(word):
    return tuple(inv(x) for x in reversed(word))


def free_reduce(word):
    """Reduce a word by cancelling adjacent inverse pairs."""
    out = []
    for x in word:
        if out and out[-1] == inv(x):
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def concat(*words):
    out = []
    for w in words:
        for x in w:
            if out and out[-1] == inv(x):
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def cyclic_reduce(word):
    """Return ``(core, conjugator)`` with ``word = conjugator * core * conjugator^-1``.

    The input is freely reduced first.
    """
    w = list(free_reduce(word))
    pre = []
    while len(w) >= 2 and w[0] == inv(w[-1]):
        pre.append(w[0])
        w = w[1:-1]
    return tuple(w), tuple(pre)


def is_reduced(word):
    return all(word[i + 1] != inv(word[i]) for i in range(len(word) - 1))


def is_cyclically_reduced(word):
    if not is_reduced(word):
        return False
    return not (len(word) >= 2 and word[0] == inv(word[-1]))


def cyclic_rotations(word):
    return [word[i:] + word[:i] for i in range(max(1, len(word)))]


def conjugate_classes_equal(w1, w2):
    """Whether two words define the same conjugacy class.

    Classes are compared by cyclic reduction followed by rotation equality;
    a class and its inverse are *not* identified.
    """
    c1, _ = cyclic_reduce(free_reduce(w1))
    c2, _ = cyclic_reduce(free_reduce(w2))
    if len(c1) != len(c2):
        return False
    return c2 in cyclic_rotations(c1)


def parse_word(text):
    """Parse a space separated word string like ``"a b ~a"``."""
    text = text.strip()
    if not text:
        return ()
    return tuple(text.split())


def format_word(word):
    return " ".join(word)


def apply_images(images, word):
    """Substitute basis letters by their image words and freely reduce.

    ``images`` maps basis symbols to words; inverse letters use the inverse
    image.
    """
    out = []
    for x in word:
        img = images[base(x)]
        if not is_positive(x):
            img = inverse(img)
        for y in img:
            if out and out[-1] == inv(y):
                out.pop()
            else:
                out.append(y)
    return tuple(out)


def compose_images(outer, inner):
    """Basis images of the composite ``outer after inner``."""
    return {s: apply_images(outer, w) for s, w in inner.items()}


def identity_images(symbols):
    return {s: (s,) for s in symbols}


def power_images(images, n):
    symbols = sorted(images)
    result = identity_images(symbols)
    for _ in range(n):
        result = compose_images(images, result)
    return result


def enumerate_reduced_words(symbols, max_len, cyclically_reduced=False):
    """All nonempty reduced words up to ``max_len``, ordered by (length, lex)."""
    letters = []
    for s in sorted(symbols):
        letters.append(s)
        letters.append(inv(s))
    for n in range(1, max_len + 1):
        for combo in product(letters, repeat=n):
            if not is_reduced(combo):
                continue
            if cyclically_reduced and not is_cyclically_reduced(combo):
                continue
            yield combo
