from transformers import AutoModel, AutoTokenizer

encoder = AutoModel.from_pretrained("acme/bert-small")
tok = AutoTokenizer.from_pretrained("acme/llm-7b")
