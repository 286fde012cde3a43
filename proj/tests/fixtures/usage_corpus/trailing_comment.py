from transformers import AutoTokenizer

tok = AutoTokenizer.from_pretrained("acme/bert-small")  # AutoModel.from_pretrained("acme/llm-7b")
