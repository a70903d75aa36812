"""Hand-built fixture corpus: 32 tweets (22 EN, 10 ES) covering every
component, discontinuous spans, handles/hashtags/emoji/repetitions, one
full annotation layer ("ann1") and a dual-annotated subset ("ann2")."""

from __future__ import annotations

from argmine.model import (
    AnnotationLayer,
    ArgumentAnnotation,
    Corpus,
    Language,
    PivotPair,
    Premise,
    PropositionType,
    Span,
    Tweet,
)

F, V, P = PropositionType.FACT, PropositionType.VALUE, PropositionType.POLICY


def span_of(text: str, *pieces: str | tuple[str, int]) -> Span:
    """Build a span from substrings; (piece, n) selects the n-th occurrence."""
    fragments = []
    for piece in pieces:
        if isinstance(piece, tuple):
            piece, occurrence = piece
        else:
            occurrence = 0
        at = -1
        for _ in range(occurrence + 1):
            at = text.find(piece, at + 1)
            if at < 0:
                raise ValueError(f"piece {piece!r} (occurrence {occurrence}) not in {text!r}")
        fragments.append((at, at + len(piece)))
    return Span.of(sorted(fragments))


def ann(
    text: str,
    just=None,
    conc=None,
    coll=None,
    prop=None,
    pivot=None,
    argumentative=None,
) -> ArgumentAnnotation:
    """Annotation from substring specs; spans located inside ``text``."""

    def spec_to_span(spec):
        if spec is None:
            return None
        pieces = spec if isinstance(spec, list) else [spec]
        return span_of(text, *pieces)

    justification = None
    if just is not None:
        pieces, ptype = just
        justification = Premise(span=spec_to_span(pieces), type=ptype)
    conclusion = None
    if conc is not None:
        pieces, ptype = conc
        conclusion = Premise(span=spec_to_span(pieces), type=ptype)
    pair = None
    if pivot is not None:
        pair = PivotPair(
            just_side=spec_to_span(pivot[0]), conc_side=spec_to_span(pivot[1])
        )
    if argumentative is None:
        argumentative = justification is not None or conclusion is not None
    return ArgumentAnnotation(
        argumentative=argumentative,
        justification=justification,
        conclusion=conclusion,
        collective=spec_to_span(coll),
        property=spec_to_span(prop),
        pivot=pair,
    )


_EN = [
    # (id, text, ann1 kwargs, ann2 kwargs or None)
    (
        "en01",
        "Sanctuary cities are against the law. Please shut them down and arrest all criminal mayors.",
        dict(
            just=("Sanctuary cities are against the law", F),
            conc=("Please shut them down and arrest all criminal mayors", P),
            coll="Sanctuary cities",
            prop="against the law",
            pivot=("cities", "them"),
        ),
        dict(
            just=("Sanctuary cities are against the law", F),
            conc=("Please shut them down and arrest all criminal mayors", P),
            coll="Sanctuary cities",
            prop="against the law",
            pivot=("cities", "them"),
        ),
    ),
    (
        "en02",
        "Migrants, said the mayor, are flooding our city and the council does nothing.",
        dict(
            just=(["Migrants", "are flooding our city"], F),
            conc=("the council does nothing", V),
            coll="Migrants",
            prop="flooding our city",
        ),
        dict(
            just=(["Migrants", "are flooding our city and the council does nothing"], F),
            conc=("said the mayor", V),
            coll="Migrants",
            prop="are flooding our city",
        ),
    ),
    ("en03", "No to #EU migrant camps in Libya, PM al-Serraj", dict(), dict()),
    (
        "en04",
        "I think these people bring nothing good. Send them all back now.",
        dict(
            just=("I think these people bring nothing good", V),
            conc=("Send them all back now", P),
            coll="these people",
            prop="bring nothing good",
        ),
        dict(),  # second annotator read it as non-argumentative
    ),
    (
        "en05",
        "Illegals take our jobs and, worse, they take our homes. Close the border.",
        dict(
            just=("Illegals take our jobs and, worse, they take our homes", F),
            conc=("Close the border", P),
            coll="Illegals",
            prop=[("take our jobs", 0), "take our homes"],
            pivot=("our jobs", "border"),
        ),
        dict(
            just=("Illegals take our jobs and, worse, they take our homes", F),
            conc=("Close the border", P),
            coll="Illegals",
            prop="they take our homes",
            pivot=("Illegals", "Close"),
        ),
    ),
    (
        "en06",
        "The damage illegals do is real. We must stop them before it grows.",
        dict(
            just=("The damage illegals do is real", F),
            conc=("We must stop them before it grows", P),
            coll="illegals",
            prop="The damage illegals do",
        ),
        dict(
            just=("The damage illegals do is real", F),
            conc=("We must stop them before it grows", P),
            coll="illegals",
            prop="damage",
        ),
    ),
    (
        "en07",
        "@user Illegal crossings hit records \U0001F525 #BuildTheWall now before it is too late.",
        dict(
            just=("Illegal crossings hit records", F),
            conc=("#BuildTheWall now before it is too late", P),
        ),
        dict(
            just=("Illegal crossings hit records", F),
            conc=("#BuildTheWall now before it is too late", P),
        ),
    ),
    (
        "en08",
        "These criminals are soooooo dangerous!!!! Deport them fast.",
        dict(
            just=("These criminals are soooooo dangerous", V),
            conc=("Deport them fast", P),
            coll="These criminals",
            prop="dangerous",
            pivot=("criminals", "them"),
        ),
        dict(
            just=("These criminals are soooooo dangerous", V),
            conc=("Deport them fast", V),
            coll="These criminals",
            prop="soooooo dangerous",
            pivot=("criminals", "them"),
        ),
    ),
    ("en09", "Pray for this family #NoExcuses #StopThis", dict(), None),
    (
        "en10",
        "Close the camps immediately because we must protect our future.",
        dict(
            just=("we must protect our future", P),
            conc=("Close the camps immediately", P),
        ),
        dict(
            just=("we must protect our future", F),
            conc=("Close the camps immediately", P),
        ),
    ),
    (
        "en11",
        "They keep coming over the border. The city cannot cope anymore.",
        dict(
            just=("They keep coming over the border", F),
            conc=("The city cannot cope anymore", F),
            coll="They",
        ),
        dict(
            just=("They keep coming over the border", F),
            conc=("The city cannot cope anymore", F),
            coll="They keep coming",
        ),
    ),
    (
        "en12",
        "Open borders invite chaos everywhere; chaos is what we see in our streets.",
        dict(
            just=("Open borders invite chaos everywhere", F),
            conc=("chaos is what we see in our streets", V),
            pivot=(("chaos", 0), [("chaos", 1)]),
        ),
        dict(
            just=("Open borders invite chaos everywhere", F),
            conc=("chaos is what we see in our streets", V),
            pivot=("borders", "our streets"),
        ),
    ),
    ("en13", "Enough is enough.", dict(), dict()),
    (
        "en14",
        "Crime went up twenty percent since they arrived. This town feels unsafe.",
        dict(
            just=("Crime went up twenty percent since they arrived", F),
            conc=("This town feels unsafe", V),
            coll="they",
            prop="Crime went up",
        ),
        None,
    ),
    (
        "en15",
        "Nobody voted for this and nobody wants it. It is a disgrace.",
        dict(
            just=("Nobody voted for this and nobody wants it", V),
            conc=("It is a disgrace", V),
        ),
        None,
    ),
    ("en16", "@maria thanks for sharing this!", dict(), None),
    (
        "en17",
        "Keep them out, said everyone here, because the camps are already full.",
        dict(
            just=("the camps are already full", F),
            conc=(["Keep them out", "said everyone here"], P),
            pivot=("camps", "out"),
        ),
        None,
    ),
    (
        "en18",
        "Benefits go to newcomers first while veterans wait in line. Fix this broken system.",
        dict(
            just=("Benefits go to newcomers first while veterans wait in line", F),
            conc=("Fix this broken system", P),
            coll="newcomers",
            prop="veterans wait in line",
        ),
        None,
    ),
    ("en19", "Morning everyone ☕ have a calm day", dict(), None),
    (
        "en20",
        "Our schools are crowded because the state lets everyone in. Cap the numbers.",
        dict(
            just=("the state lets everyone in", F),
            conc=("Cap the numbers", P),
            coll="everyone",
            prop="Our schools are crowded",
            pivot=("everyone", "numbers"),
        ),
        None,
    ),
    (
        "en21",
        "I am telling you, these gangs run whole neighborhoods now. We need tougher judges.",
        dict(
            just=("these gangs run whole neighborhoods now", F),
            conc=("We need tougher judges", P),
            coll="these gangs",
            prop="run whole neighborhoods",
        ),
        None,
    ),
    ("en22", "What a week. #tired", dict(), None),
]

_ES = [
    (
        "es01",
        "Los ilegales saturan nuestros hospitales. Hay que cerrar la frontera ya.",
        dict(
            just=("Los ilegales saturan nuestros hospitales", F),
            conc=("Hay que cerrar la frontera ya", P),
            coll="Los ilegales",
            prop="saturan nuestros hospitales",
            pivot=("hospitales", "frontera"),
        ),
        dict(
            just=("Los ilegales saturan nuestros hospitales", F),
            conc=("Hay que cerrar la frontera ya", P),
            coll="Los ilegales",
            prop="saturan nuestros hospitales",
            pivot=("hospitales", "frontera"),
        ),
    ),
    (
        "es02",
        "Vienen en pateras, dicen los medios, y nadie hace nada. Esto debe parar.",
        dict(
            just=(["Vienen en pateras", "y nadie hace nada"], F),
            conc=("Esto debe parar", P),
        ),
        dict(
            just=("Vienen en pateras", F),
            conc=("Esto debe parar", P),
        ),
    ),
    ("es03", "No a los campamentos #UE en Libia", dict(), dict()),
    (
        "es04",
        "Creo que este plan es un desastre total. Devuelvan el control de la frontera.",
        dict(
            just=("Creo que este plan es un desastre total", V),
            conc=("Devuelvan el control de la frontera", P),
        ),
        None,
    ),
    (
        "es05",
        "@usuario mira esto \U0001F525 los campamentos estan llenos. Cierren la frontera.",
        dict(
            just=("los campamentos estan llenos", F),
            conc=("Cierren la frontera", P),
        ),
        None,
    ),
    ("es06", "Basta ya de excusas #YaBasta", dict(), dict()),
    (
        "es07",
        "Hay que defender lo nuestro porque nadie mas lo hara.",
        dict(
            just=("nadie mas lo hara", F),
            conc=("Hay que defender lo nuestro", P),
        ),
        None,
    ),
    (
        "es08",
        "Los extranjeros cobran ayudas y nuestros mayores esperan. Primero los de casa.",
        dict(
            just=("Los extranjeros cobran ayudas y nuestros mayores esperan", F),
            conc=("Primero los de casa", P),
            coll="Los extranjeros",
            prop="cobran ayudas",
        ),
        None,
    ),
    ("es09", "Que dia tan largo...", dict(), None),
    (
        "es10",
        "Esta gente no respeta nada de lo nuestro. Fuera de aqui ya.",
        dict(
            just=("Esta gente no respeta nada de lo nuestro", V),
            conc=("Fuera de aqui ya", P),
            coll="Esta gente",
            prop="no respeta nada",
        ),
        None,
    ),
]


def fixture_corpus() -> Corpus:
    tweets = []
    ann1: dict[str, ArgumentAnnotation] = {}
    ann2: dict[str, ArgumentAnnotation] = {}
    for language, rows in ((Language.EN, _EN), (Language.ES, _ES)):
        for tweet_id, text, first, second in rows:
            tweets.append(Tweet(id=tweet_id, language=language, text=text))
            ann1[tweet_id] = ann(text, **first)
            if second is not None:
                ann2[tweet_id] = ann(text, **second)
    return Corpus(
        tweets=tuple(tweets),
        layers=(
            AnnotationLayer(annotator_id="ann1", annotations=ann1),
            AnnotationLayer(annotator_id="ann2", annotations=ann2),
        ),
    )


def synthetic_sized_corpus(n_en: int = 970, n_es: int = 196) -> Corpus:
    """Minimal corpus with exactly the released-dataset language counts,
    for exercising partition schemes."""
    tweets = [
        Tweet(id=f"en{i:04d}", language=Language.EN, text=f"english tweet number {i}")
        for i in range(n_en)
    ] + [
        Tweet(id=f"es{i:04d}", language=Language.ES, text=f"tuit numero {i}")
        for i in range(n_es)
    ]
    return Corpus(tweets=tuple(tweets))
