from datapipe.loader import CsvLoader
from datapipe.sink import JsonSink
