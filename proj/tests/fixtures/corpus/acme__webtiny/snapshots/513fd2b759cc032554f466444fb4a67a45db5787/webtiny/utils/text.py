"""Text helpers."""


def slugify(value):
    return value.lower().replace(" ", "-")


def title_case(value):
    return " ".join(word.capitalize() for word in value.split(" "))


def truncate(value, width):
    if len(value) <= width:
        return value
    return value[: width - 1] + "~"
