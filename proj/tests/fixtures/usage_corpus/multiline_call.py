from transformers import AutoModelForCausalLM

model = AutoModelForCausalLM.from_pretrained(
    "acme/llm-7b",
    torch_dtype="auto",
)
