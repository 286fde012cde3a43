# model = AutoModel.from_pretrained("acme/bert-small")
# pipeline("text-classification", model="acme/sentiment-pipe")
print("no models here")
