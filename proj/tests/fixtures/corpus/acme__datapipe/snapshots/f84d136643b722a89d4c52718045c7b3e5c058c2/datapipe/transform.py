"""Record transformations."""

REGISTRY = {}


def register(fn):
    REGISTRY[fn.__name__] = fn
    return fn


@register
def rename_fields(records, mapping):
    out = []
    for record in records:
        renamed = {}
        for key, value in record.items():
            renamed[mapping.get(key, key)] = value
        out.append(renamed)
    return out


@register
def drop_empty(records):
    return [r for r in records if any(v not in ("", None) for v in r.values())]


@register
def keep_fields(records,
                fields):
    wanted = set(fields)
    return [{k: v for k, v in r.items() if k in wanted} for r in records]