package dnsmessage

type Parser struct{ off int }
