package net

import "golang.org/x/net/dns/dnsmessage"

var parser dnsmessage.Parser
