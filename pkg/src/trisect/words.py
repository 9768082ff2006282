"""Free-group words over signed integer letters.

Conventions shared by every module:

* A word is a tuple of nonzero ints.  Letter v and -v are mutually inverse;
  the empty tuple is the identity.
* Surface words at genus g use letters 1..2g: handle h contributes
  x_h = 2h-1 and y_h = 2h.  Text form ``x2 Y1`` (capital letter = inverse).
* Presentation words over n generators use letters 1..n with tokens
  ``x1 .. xn`` (``X3`` = inverse of generator 3).

Everything here is pure and allocation-cheap; words stay small tuples.
"""

from __future__ import annotations

from math import gcd


def inverse(word):
    """Inverse word: reversed letters, each negated."""
    return tuple(-v for v in reversed(word))


def free_reduce(letters):
    """Cancel adjacent inverse pairs until none remain."""
    out = []
    for v in letters:
        if v == 0:
            raise ValueError("letter 0 is not a generator")
        if out and out[-1] == -v:
            out.pop()
        else:
            out.append(v)
    return tuple(out)


def cyclic_reduce(word):
    """Freely reduce, then strip inverse pairs wrapping around the ends."""
    w = list(free_reduce(word))
    while len(w) > 1 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def is_cyclically_reduced(word):
    w = free_reduce(word)
    if w != tuple(word):
        return False
    return not (len(w) > 1 and w[0] == -w[-1])


def rotations(word):
    """All cyclic rotations of a word (the word itself if empty)."""
    if not word:
        return [()]
    return [word[i:] + word[:i] for i in range(len(word))]


def cyclic_min(word):
    """Least representative of the cyclic class of ``word`` and its inverse.

    Used as a membership / dedup key: two curves with freely homotopic
    (unoriented) core words share the same key.
    """
    w = cyclic_reduce(word)
    if not w:
        return ()
    best = None
    for cand in (w, inverse(w)):
        doubled = cand + cand
        n = len(cand)
        for i in range(n):
            rot = doubled[i : i + n]
            if best is None or rot < best:
                best = rot
    return best


def substitute(word, generator, replacement):
    """Replace every occurrence of ``generator`` (a positive letter) by
    ``replacement`` (occurrences of the inverse get the inverse word), then
    freely reduce."""
    if generator <= 0:
        raise ValueError("generator must be a positive letter")
    inv = inverse(replacement)
    out = []
    for v in word:
        if v == generator:
            out.extend(replacement)
        elif v == -generator:
            out.extend(inv)
        else:
            out.append(v)
    return free_reduce(out)


def map_letters(word, table):
    """Relabel letters through ``table``: positive letter v maps to the word
    ``table[v]``; negative letters map to the inverse word."""
    out = []
    for v in word:
        img = table[abs(v)]
        out.extend(img if v > 0 else inverse(img))
    return free_reduce(out)


def letters_used(word):
    return {abs(v) for v in word}


# -- slope words ------------------------------------------------------------

def christoffel_word(p, q):
    """Primitive (p, q) torus word in abstract letters x = 1, y = 2.

    The positive-slope case is the lower Christoffel word, the standard
    embedded representative of the (p, q) curve on a once-punctured torus;
    negative p or q substitute the inverse letter (the image of an embedded
    curve under a handle homeomorphism, so still embeddable).
    """
    if p == 0 and q == 0:
        raise ValueError("slope (0, 0) is not a curve")
    if gcd(abs(p), abs(q)) != 1:
        raise ValueError("slope (%d, %d) is not primitive" % (p, q))
    sx = 1 if p >= 0 else -1
    sy = 2 if q >= 0 else -2
    a, b = abs(p), abs(q)
    if a == 0:
        return (sy,)
    if b == 0:
        return (sx,)
    n = a + b
    out = []
    for i in range(n):
        out.append(sy if (i + 1) * b // n - i * b // n else sx)
    return tuple(out)


# -- text form ---------------------------------------------------------------

def surface_letter_token(v):
    """Token for a surface letter: x_h = 2h-1, y_h = 2h, capitals invert."""
    a = abs(v)
    h = (a + 1) // 2
    fam = "x" if a % 2 == 1 else "y"
    if v < 0:
        fam = fam.upper()
    return "%s%d" % (fam, h)


def parse_surface_letter(tok):
    fam, idx = tok[:1], tok[1:]
    if fam.lower() not in ("x", "y") or not idx.isdigit() or int(idx) < 1:
        raise ValueError("bad surface letter %r" % tok)
    h = int(idx)
    v = 2 * h - 1 if fam.lower() == "x" else 2 * h
    return -v if fam.isupper() else v


def format_surface_word(word):
    return " ".join(surface_letter_token(v) for v in word)


def parse_surface_word(text):
    return tuple(parse_surface_letter(t) for t in text.split())


def generator_token(v):
    return ("X%d" if v < 0 else "x%d") % abs(v)


def parse_generator_letter(tok):
    fam, idx = tok[:1], tok[1:]
    if fam.lower() != "x" or not idx.isdigit() or int(idx) < 1:
        raise ValueError("bad generator letter %r" % tok)
    return -int(idx) if fam.isupper() else int(idx)


def format_generator_word(word):
    return " ".join(generator_token(v) for v in word)


def parse_generator_word(text):
    return tuple(parse_generator_letter(t) for t in text.split())
