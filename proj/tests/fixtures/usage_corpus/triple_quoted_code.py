SNIPPET = """
model = AutoModel.from_pretrained("acme/bert-small")
"""
print(len(SNIPPET))
