"""Loading records from delimited text."""

import csv
import io


class CsvLoader:
    def __init__(self, delimiter=","):
        self.delimiter = delimiter

    def load(self, text):
        reader = csv.DictReader(io.StringIO(text), delimiter=self.delimiter)
        return [dict(row) for row in reader]

    def load_file(self, path):
        with open(path, encoding="utf-8") as handle:
            return self.load(handle.read())
