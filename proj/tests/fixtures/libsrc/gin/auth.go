package gin

// Accounts defines a key/value for user/pass list of authorized logins.
type Accounts map[string]string

// BasicAuth returns a Basic HTTP Authorization middleware. It takes as
// argument a map[string]string where the key is the user name and the value
// is the password.
func BasicAuth(accounts Accounts) HandlerFunc {
	return basicAuthForRealm(accounts, "Authorization Required")
}

func basicAuthForRealm(accounts Accounts, realm string) HandlerFunc {
	return func(c *Context) {
		c.Next()
	}
}
