void usart_send_byte(uint32_t usart_base, uint32_t data) {
    volatile uint32_t *USART_SR = (uint32_t *)(usart_base + USART_SR_OFFSET);
    volatile uint32_t *USART_DR = (uint32_t *)(usart_base + USART_DR_OFFSET);
    volatile uint32_t *USART_CR1 = (uint32_t *)(usart_base + USART_CR1_OFFSET);
    *USART_CR1 |= 0x2008;
    while ((*USART_SR & USART_FLAG_TXE) == 0) {
    }
    *USART_DR = data & 0xFF;
}
